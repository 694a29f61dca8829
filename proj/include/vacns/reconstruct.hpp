#pragma once

#include <vector>

#include "vacns/scheme.hpp"

namespace vacns {

/// Immutable copy of a grid state at one output time.
struct Snapshot {
  double t = 0.0;
  int N = 0;
  double h = 0.0;
  std::vector<double> rho;  ///< size N+1
  std::vector<double> u;    ///< size N+1
  double u_ghost = 0.0;
  std::vector<double> r;    ///< size N+2

  static Snapshot of(const GridState& s);
};

struct NodeValues {
  double rho = 0.0;
  double u = 0.0;
  double r = 0.0;
};

/// Piecewise-linear reconstruction on the half-open bracket convention:
/// x in (jh, (j+1)h] interpolates nodes j and j+1; x = 0 extends the first
/// node. rho and u interpolate linearly; r interpolates r^n linearly and
/// takes the n-th root.
NodeValues piecewise_linear_eval(const Snapshot& s,
                                 const PhysicalParameters& p, double x);

/// Step-function reconstruction: x in (jh, (j+1)h] takes the node-j values;
/// x = 0 extends the first cell.
NodeValues step_eval(const Snapshot& s, double x);

struct EulerianSample {
  double r = 0.0;
  double rho = 0.0;
  double u = 0.0;
};

/// count >= 2 samples at uniformly spaced x in [0,1] mapped to radii.
/// Interior samples use the piecewise-linear reconstruction; the final
/// sample carries the outermost particle radius r_{N+1} so the profile spans
/// the whole fluid region. Radii are strictly increasing.
std::vector<EulerianSample> eulerian_profile(const Snapshot& s,
                                             const PhysicalParameters& p,
                                             int count);

/// Outermost particle radius r_{N+1}; the discrete free boundary b(t).
double free_boundary(const Snapshot& s);

struct MassReport {
  double lagrangian = 0.0;  ///< N*h, exactly 1 by construction
  double eulerian = 0.0;    ///< trapezoid of r^{n-1} rho dr over the profile
};

/// Lagrangian mass of cells 1..N and the Eulerian quadrature mass of the
/// reconstructed profile.
MassReport total_mass(const Snapshot& s, const PhysicalParameters& p);

}  // namespace vacns
