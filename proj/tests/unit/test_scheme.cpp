#include <doctest.h>

#include <cmath>
#include <random>

#include "vacns/scheme.hpp"

using namespace vacns;

namespace {

PhysicalParameters standard() { return PhysicalParameters{}; }

InitialData compliant() {
  InitialData d;
  d.rho0 = power_profile(1.0, 0.4);
  d.u0 = polynomial_profile({0.0, 0.1});
  return d;
}

// Hand-built uniform state: rho = 1 on three nodes, h = 1/2, n = 2, a = 1.
GridState flat_state(const PhysicalParameters& p) {
  GridState s;
  s.N = 2;
  s.h = 0.5;
  s.rho = {1.0, 1.0, 1.0};
  s.u = {0.0, 0.0, 0.0};
  refresh_geometry(s, p);
  return s;
}

GridState random_state(std::mt19937& rng, const PhysicalParameters& p) {
  std::uniform_int_distribution<int> pick_n(2, 20);
  std::uniform_real_distribution<double> pick_rho(0.1, 3.0);
  std::uniform_real_distribution<double> pick_u(-1.0, 1.0);
  GridState s;
  s.N = pick_n(rng);
  s.h = 1.0 / s.N;
  s.rho.resize(s.N + 1);
  s.u.resize(s.N + 1);
  for (double& v : s.rho) v = pick_rho(rng);
  for (double& v : s.u) v = pick_u(rng);
  s.u[0] = 0.0;
  refresh_geometry(s, p);
  return s;
}

}  // namespace

TEST_CASE("rho_pow") {
  CHECK(rho_pow(2.0, 3.0) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(rho_pow(0.0, 0.5) == 0.0);
  CHECK(rho_pow(1e-301, 2.0) == 0.0);
  CHECK(rho_pow(4.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(rho_pow(-1.0, 2.0), std::domain_error);
}

TEST_CASE("ipow") {
  CHECK(ipow(3.0, 0) == 1.0);
  CHECK(ipow(3.0, 1) == 3.0);
  CHECK(ipow(2.0, 10) == 1024.0);
  CHECK(ipow(-2.0, 3) == -8.0);
}

TEST_CASE("forward difference") {
  const std::vector<double> w = {1.0, 3.0, 2.0};
  CHECK(forward_difference(w, 0, 0.5) == doctest::Approx(4.0));
  CHECK(forward_difference(w, 1, 0.5) == doctest::Approx(-2.0));
}

TEST_CASE("radius law on the unit-density grid") {
  const PhysicalParameters p = standard();  // n = 2, a = 1
  const std::vector<double> rho = {1.0, 1.0, 1.0};
  const auto r = recompute_radii(rho, p, 0.5);
  REQUIRE(r.size() == 4);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r[3] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("radius law in three dimensions") {
  PhysicalParameters p = standard();
  p.n = 3;
  const std::vector<double> rho = {3.0};
  const auto r = recompute_radii(rho, p, 1.0);
  REQUIRE(r.size() == 2);
  CHECK(r[1] == doctest::Approx(std::cbrt(2.0)).epsilon(1e-15));
}

TEST_CASE("radius law rejects vanished density") {
  const std::vector<double> rho = {1.0, 0.0, 1.0};
  CHECK_THROWS_AS(recompute_radii(rho, standard(), 0.25),
                  VacuumCollapseError);
}

TEST_CASE("radii increase strictly") {
  std::mt19937 rng(7);
  const PhysicalParameters p = standard();
  for (int trial = 0; trial < 50; ++trial) {
    const GridState s = random_state(rng, p);
    for (size_t i = 0; i + 1 < s.r.size(); ++i) CHECK(s.r[i] < s.r[i + 1]);
    CHECK(s.r[0] == p.a);
  }
}

TEST_CASE("stress at rest reduces to negative pressure") {
  const PhysicalParameters p = standard();
  GridState s = flat_state(p);
  s.rho = {1.0, 2.0, 3.0};
  refresh_geometry(s, p);
  s.u = {0.0, 0.0, 0.0};
  s.u_ghost = 0.0;  // override the closure to isolate the formula
  CHECK(stress(s, 1, p) == doctest::Approx(-1.0));
  CHECK(stress(s, 2, p) == doctest::Approx(-std::pow(2.0, p.gamma)));
  CHECK(stress(s, 3, p) == doctest::Approx(-std::pow(3.0, p.gamma)));
}

TEST_CASE("stress depends only on its own cell") {
  const PhysicalParameters p = standard();
  std::mt19937 rng(11);
  GridState s = random_state(rng, p);
  const double sigma2 = stress(s, 2, p);
  s.rho[0] *= 1.7;  // cell 0 feeds sigma_1 only
  CHECK(stress(s, 2, p) == sigma2);
}

TEST_CASE("boundary closure on the frozen example") {
  // n=2, c1=1, c2=0, theta=1, gamma=2, h=1/2, rho_N=1, u_N=0,
  // r_N=sqrt(3), r_{N+1}=2: the balance reads -7 u_ghost = -1.
  const PhysicalParameters p = standard();
  GridState s;
  s.N = 2;
  s.h = 0.5;
  s.rho = {1.0, 1.0, 1.0};
  s.u = {0.0, 0.0, 0.0};
  s.r = {1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0};
  const double ghost = close_boundary(s, p);
  CHECK(ghost == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  s.u_ghost = ghost;
  CHECK(boundary_residual(s, p) ==
        doctest::Approx(0.0).epsilon(1e-14).scale(1.0));
}

TEST_CASE("closure keeps the residual at rounding level on random states") {
  std::mt19937 rng(23);
  const PhysicalParameters p = standard();
  for (int trial = 0; trial < 100; ++trial) {
    const GridState s = random_state(rng, p);
    CHECK(std::abs(boundary_residual(s, p)) <=
          1e-12 * std::max(1.0, rho_pow(s.rho[s.N], p.gamma)));
  }
}

TEST_CASE("closure vanishes with the boundary density") {
  const PhysicalParameters p = standard();
  GridState s;
  s.N = 2;
  s.h = 0.5;
  s.u = {0.0, 0.3, 0.2};
  for (double rhoN : {1e-4, 1e-8, 1e-12}) {
    s.rho = {1.0, 1.0, rhoN};
    refresh_geometry(s, p);
    // The inhomogeneity scales like rho_N^{gamma-theta} = rho_N while the
    // coefficient only degenerates like sqrt(rho_N) through r_{N+1}.
    CHECK(std::abs(s.u_ghost) <= 2.0 * std::sqrt(rhoN) + 1e-10);
  }
}

TEST_CASE("degenerate closure coefficient is rejected") {
  // Coefficient -(2c1+c2) rho_N r_{N+1}^{n-1}/h + 2c1(n-1)/r_{N+1} crosses
  // zero at rho_N = 2 c1 (n-1) h / ((2c1+c2) r_{N+1}^n).
  const PhysicalParameters p = standard();
  GridState s;
  s.N = 2;
  s.h = 0.5;
  s.rho = {1.0, 1.0, 0.125};
  s.u = {0.0, 0.1, 0.1};
  s.r = {1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0};
  CHECK_THROWS_AS(close_boundary(s, p), DegenerateClosureError);
}

TEST_CASE("telescoped flux sums match the boundary momentum exactly") {
  std::mt19937 rng(2024);
  PhysicalParameters p = standard();
  for (int trial = 0; trial < 1000; ++trial) {
    p.n = 2 + (trial % 2);
    const GridState s = random_state(rng, p);
    std::vector<double> mom(s.N + 2);
    for (int i = 0; i <= s.N; ++i) mom[i] = ipow(s.r[i], p.n - 1) * s.u[i];
    mom[s.N + 1] = ipow(s.r[s.N + 1], p.n - 1) * s.u_ghost;
    double acc = 0.0;
    for (int i = 0; i <= s.N; ++i) {
      acc += s.h * (mom[i + 1] - mom[i]) / s.h;
      const double target = mom[i + 1];  // mom[0] = a^{n-1} u_0 = 0
      CHECK(std::abs(p.n * acc - p.n * target) <=
            1e-12 * std::max(1.0, std::abs(p.n * target)));
    }
  }
}

TEST_CASE("density equation on the flat state") {
  const PhysicalParameters p = standard();
  GridState s = flat_state(p);
  s.u = {0.0, 0.0, 0.0};
  refresh_geometry(s, p);
  const RhsVector rhs = assemble_rhs(s, ForceModel::zero(), p);
  REQUIRE(rhs.drho.size() == 3);
  REQUIRE(rhs.du.size() == 2);
  // At rest the ghost still moves (outward pressure release), so the last
  // cell drains while interior cells only feel pressure imbalances.
  const double ghost = s.u_ghost;
  CHECK(rhs.drho[0] ==
        doctest::Approx(-1.0 * (s.r[1] * 0.0 - s.r[0] * 0.0) / s.h));
  CHECK(rhs.drho[2] ==
        doctest::Approx(-(s.r[3] * ghost - s.r[2] * 0.0) / s.h));
}

TEST_CASE("velocity equation feels an imposed force") {
  const PhysicalParameters p = standard();
  GridState s = flat_state(p);
  const RhsVector base = assemble_rhs(s, ForceModel::zero(), p);
  ForceModel f;
  f.kind = "custom";
  f.f = [](double, double) { return 0.75; };
  f.envelope = [](double) { return 0.75; };
  const RhsVector pushed = assemble_rhs(s, f, p);
  for (size_t j = 0; j < base.du.size(); ++j)
    CHECK(pushed.du[j] - base.du[j] == doctest::Approx(0.75).epsilon(1e-14));
  for (size_t i = 0; i < base.drho.size(); ++i)
    CHECK(pushed.drho[i] == base.drho[i]);
}

TEST_CASE("initial state takes exact cell averages") {
  const PhysicalParameters p = standard();
  const InitialData d = compliant();
  const int N = 8;
  const GridState s = make_initial_state(p, d, N);
  REQUIRE(s.N == N);
  CHECK(s.h == doctest::Approx(1.0 / N));
  CHECK(s.t == 0.0);
  CHECK(s.u[0] == 0.0);
  CHECK(s.rho[0] == s.rho[1]);
  for (int j = 1; j <= N; ++j) {
    const double x0 = (j - 1) * s.h, x1 = j * s.h;
    CHECK(s.u[j] == doctest::Approx(0.1 * 0.5 * (x0 + x1)).epsilon(1e-14));
    CHECK(s.rho[j] ==
          doctest::Approx(d.rho0->mean(x0, x1)).epsilon(1e-14));
  }
  CHECK(s.r[0] == p.a);
  CHECK(s.u_ghost == doctest::Approx(close_boundary(s, p)));
  CHECK_THROWS_AS(make_initial_state(p, d, 1), std::invalid_argument);
}

TEST_CASE("grid energy on frozen states") {
  const std::vector<double> rho = {1.0, 1.0, 1.0};
  const std::vector<double> rest = {0.0, 0.0, 0.0};
  const std::vector<double> moving = {0.0, 1.0, 1.0};
  CHECK(grid_energy(rho, rest, 0.5, 2.0) == doctest::Approx(1.5));
  CHECK(grid_energy(rho, moving, 0.5, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("grid energy is additive over cells") {
  std::mt19937 rng(5);
  const PhysicalParameters p = standard();
  const GridState s = random_state(rng, p);
  const double whole = grid_energy(s.rho, s.u, s.h, p.gamma);
  double parts = 0.0;
  for (int j = 0; j <= s.N; ++j) {
    const std::vector<double> rho1 = {s.rho[j]};
    const std::vector<double> u1 = {s.u[j]};
    parts += grid_energy(rho1, u1, s.h, p.gamma);
  }
  CHECK(whole == doctest::Approx(parts).epsilon(1e-13));
}
