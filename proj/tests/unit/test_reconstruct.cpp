#include <doctest.h>

#include <cmath>

#include "vacns/reconstruct.hpp"

using namespace vacns;

namespace {

PhysicalParameters standard() { return PhysicalParameters{}; }

InitialData compliant() {
  InitialData d;
  d.rho0 = power_profile(1.0, 0.4);
  d.u0 = polynomial_profile({0.0, 0.1});
  return d;
}

Snapshot frozen_snapshot(const PhysicalParameters& p) {
  GridState s;
  s.N = 2;
  s.h = 0.5;
  s.rho = {1.0, 2.0, 3.0};
  s.u = {0.0, 0.5, 1.0};
  refresh_geometry(s, p);
  return Snapshot::of(s);
}

}  // namespace

TEST_CASE("snapshot copies the grid state") {
  const PhysicalParameters p = standard();
  GridState s;
  s.N = 2;
  s.h = 0.5;
  s.t = 0.75;
  s.rho = {1.0, 1.0, 1.0};
  s.u = {0.0, 0.25, 0.5};
  refresh_geometry(s, p);
  const Snapshot snap = Snapshot::of(s);
  CHECK(snap.t == 0.75);
  CHECK(snap.N == 2);
  CHECK(snap.h == 0.5);
  CHECK(snap.rho == s.rho);
  CHECK(snap.u == s.u);
  CHECK(snap.r == s.r);
  CHECK(snap.u_ghost == s.u_ghost);
}

TEST_CASE("bracket convention places samples in half-open cells") {
  const PhysicalParameters p = standard();
  const Snapshot s = frozen_snapshot(p);
  // cells are (jh, (j+1)h]; x = 0 extends the first cell
  CHECK(step_eval(s, 0.0).rho == 1.0);
  CHECK(step_eval(s, 0.5).rho == 1.0);
  CHECK(step_eval(s, 0.500001).rho == 2.0);
  CHECK(step_eval(s, 1.0).rho == 2.0);
  CHECK(step_eval(s, 1.0).u == 0.5);
  CHECK_THROWS_AS(step_eval(s, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(step_eval(s, 1.1), std::invalid_argument);
}

TEST_CASE("piecewise linear reconstruction interpolates nodes") {
  const PhysicalParameters p = standard();
  const Snapshot s = frozen_snapshot(p);
  const NodeValues at_node = piecewise_linear_eval(s, p, 0.5);
  CHECK(at_node.rho == doctest::Approx(2.0));
  CHECK(at_node.u == doctest::Approx(0.5));
  CHECK(at_node.r == doctest::Approx(s.r[1]));
  const NodeValues mid = piecewise_linear_eval(s, p, 0.25);
  CHECK(mid.rho == doctest::Approx(1.5));
  CHECK(mid.u == doctest::Approx(0.25));
}

TEST_CASE("radius interpolation happens in the r^n variable") {
  const PhysicalParameters p = standard();
  GridState g;
  g.N = 2;
  g.h = 0.5;
  g.rho = {1.0, 1.0, 1.0};
  g.u = {0.0, 0.0, 0.0};
  refresh_geometry(g, p);  // radii 1, sqrt2, sqrt3, 2
  const Snapshot s = Snapshot::of(g);
  // halfway into the first cell: r^2 = 1 + 0.5*(2-1) = 1.5
  CHECK(piecewise_linear_eval(s, p, 0.25).r ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));
}

TEST_CASE("eulerian profile spans core to free boundary") {
  const PhysicalParameters p = standard();
  const Snapshot s = frozen_snapshot(p);
  const auto prof = eulerian_profile(s, p, 33);
  REQUIRE(prof.size() == 33);
  CHECK(prof.front().r == doctest::Approx(p.a));
  CHECK(prof.back().r == s.r[s.N + 1]);
  CHECK(prof.back().rho == doctest::Approx(s.rho[s.N]));
  CHECK(prof.back().u == doctest::Approx(s.u[s.N]));
  for (size_t k = 0; k + 1 < prof.size(); ++k)
    CHECK(prof[k].r < prof[k + 1].r);
  CHECK_THROWS_AS(eulerian_profile(s, p, 1), std::invalid_argument);
}

TEST_CASE("free boundary reads the outermost radius") {
  const PhysicalParameters p = standard();
  const Snapshot s = frozen_snapshot(p);
  CHECK(free_boundary(s) == s.r[3]);
}

TEST_CASE("mass bookkeeping") {
  const PhysicalParameters p = standard();
  const GridState s = make_initial_state(p, compliant(), 64);
  const MassReport mass = total_mass(Snapshot::of(s), p);
  CHECK(mass.lagrangian == 1.0);  // 64 * (1/64) exactly
  CHECK(std::abs(mass.eulerian - 1.0) <= 10.0 / 64.0);
}

TEST_CASE("step and linear reconstructions agree on constants") {
  const PhysicalParameters p = standard();
  GridState g;
  g.N = 4;
  g.h = 0.25;
  g.rho = {2.0, 2.0, 2.0, 2.0, 2.0};
  g.u = {0.0, 0.0, 0.0, 0.0, 0.0};
  refresh_geometry(g, p);
  const Snapshot s = Snapshot::of(g);
  for (double x : {0.0, 0.1, 0.37, 0.62, 0.99, 1.0}) {
    CHECK(piecewise_linear_eval(s, p, x).rho == doctest::Approx(2.0));
    CHECK(step_eval(s, x).rho == 2.0);
  }
}
