#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vacns/config.hpp"
#include "vacns/estimates.hpp"
#include "vacns/integrator.hpp"
#include "vacns/reconstruct.hpp"

namespace vacns {

/// Raised on malformed snapshot CSV input; the message carries row/column
/// diagnostics.
class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

/// Writes the trajectory as CSV with header t,j,x,rho,u,r: one row per node
/// j = 0..N and one trailing ghost row per time (j = N+1, x and rho empty,
/// u = u_ghost, r = r_{N+1}). Deterministic byte-for-byte.
void write_snapshots_csv(const std::string& path,
                         const std::vector<Snapshot>& traj);

/// Reads a snapshot CSV back. Validates the header, the node ordering, row
/// shape, density positivity ("vacuum collapse in input") and strictly
/// increasing radii. Throws SchemaError with row/column diagnostics.
std::vector<Snapshot> read_snapshots_csv(const std::string& path);

nlohmann::ordered_json spec_to_json(const RunSpec& spec);
nlohmann::ordered_json validation_to_json(const ValidationReport& report);
nlohmann::ordered_json estimates_to_json(const EstimateReport& report);
nlohmann::ordered_json termination_to_json(const RunResult& result);

/// Serializes with 2-space indentation and a trailing newline.
void write_json(const std::string& path, const nlohmann::ordered_json& j);

void write_distance_csv(const std::string& path, const DistanceSeries& series);

}  // namespace vacns
