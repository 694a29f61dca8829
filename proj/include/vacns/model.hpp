#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace vacns {

/// Fluid constants for the spherically symmetric barotropic flow with
/// density-degenerate viscosities mu = c1*rho^theta, lambda = c2*rho^theta
/// and pressure P = rho^gamma.
struct PhysicalParameters {
  int n = 2;           ///< spatial dimension, >= 2
  double a = 1.0;      ///< solid core radius, > 0
  double gamma = 2.0;  ///< adiabatic exponent, > 1
  double theta = 1.0;  ///< viscosity degeneracy exponent, 0 < theta < gamma
  double c1 = 1.0;     ///< shear viscosity coefficient, > 0
  double c2 = 0.0;     ///< bulk viscosity coefficient, 2*c1 + n*c2 > 0

  /// Decay-rate exponent attached to the boundary weight r^beta.
  double beta() const { return 2.0 * c1 * theta * (n - 1) / (2.0 * c1 + c2); }
};

/// P(rho); requires rho >= 0.
double pressure(double rho, const PhysicalParameters& p);
/// mu(rho) = c1*rho^theta; vanishes at rho = 0.
double viscosity_mu(double rho, const PhysicalParameters& p);
/// lambda(rho) = c2*rho^theta; vanishes at rho = 0.
double viscosity_lambda(double rho, const PhysicalParameters& p);

/// One-dimensional profile on the mass coordinate x in [0,1].
/// value() and derivative() are pointwise; mean() integrates exactly where a
/// closed form exists and falls back to composite Gauss-Legendre quadrature.
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double value(double x) const = 0;
  virtual double derivative(double x) const = 0;
  virtual double mean(double x0, double x1) const;
  virtual std::string describe() const = 0;
};

using ProfilePtr = std::shared_ptr<const Profile>;

/// coef * (1-x)^alpha with exact cell averages.
ProfilePtr power_profile(double coef, double alpha);
/// sum_k coeffs[k] * x^k with exact cell averages.
ProfilePtr polynomial_profile(std::vector<double> coeffs);
/// Piecewise-linear interpolant of (xs, vals); xs strictly increasing and
/// spanning [0,1]. Cell averages are exact.
ProfilePtr table_profile(std::vector<double> xs, std::vector<double> vals);
/// base * (1 + eps*x*(1-x)); the standard density perturbation shape.
ProfilePtr bump_perturbed(ProfilePtr base, double eps);
/// base + eps*sin(pi*x); the standard velocity perturbation shape.
ProfilePtr wave_perturbed(ProfilePtr base, double eps);

/// Initial data for a run: profiles plus the exponents used by the
/// admissibility checks and the estimate functionals.
struct InitialData {
  double alpha = 0.4;    ///< vacuum decay exponent of rho0 near x = 1
  double A = 1.0;        ///< lower sandwich constant: A*(1-x)^alpha <= rho0
  double B = 1.0;        ///< upper sandwich constant: rho0 <= B*(1-x)^alpha
  double alpha0 = 0.6;   ///< weight exponent for the rho-derivative norm
  double lambda0 = 1.125;///< exponent of the |du|^lambda0 norm
  int m = 3;             ///< half the number of velocity moments tracked
  ProfilePtr rho0;       ///< initial density profile, positive on [0,1)
  ProfilePtr u0;         ///< initial velocity profile
};

/// External radial force f(r,t) with a pointwise envelope |f| <= bound(t).
struct ForceModel {
  std::string kind = "zero";
  std::function<double(double r, double t)> f;
  std::function<double(double t)> envelope;

  static ForceModel zero();
  /// amplitude * exp(-decay*t) * (core_radius / r); envelope is the prefactor.
  static ForceModel radial(double amplitude, double decay, double core_radius);

  double operator()(double r, double t) const { return f ? f(r, t) : 0.0; }
  double bound(double t) const { return envelope ? envelope(t) : 0.0; }
};

/// One named inequality with its two sides evaluated.
struct Check {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<Check> checks;
  bool ok() const;
  /// First failing check, or nullptr when everything passes.
  const Check* first_failure() const;
};

/// Evaluates every admissibility inequality on (params, data): the
/// constitutive constraints, the alpha window, the profile sandwich, the
/// exponent windows for alpha0/lambda0/m, and the quadrature-based
/// integrability checks. Never throws; failures appear as failing entries.
ValidationReport validate_assumptions(const PhysicalParameters& p,
                                      const InitialData& data,
                                      const ForceModel& force = ForceModel::zero());

/// Admissible open windows for the derived exponents at a given alpha.
struct ExponentWindows {
  double beta = 0.0;
  double alpha_lo = 0.0, alpha_hi = 0.0;      ///< window for alpha itself
  double alpha0_lo = 0.0, alpha0_hi = 0.0;
  double alpha0_default = 0.0;                ///< midpoint
  double lambda0_lo = 0.0, lambda0_hi = 0.0;
  double lambda0_default = 0.0;               ///< midpoint
  int m_min = 0;                              ///< smallest admissible integer
};

/// Computes beta and the admissible windows. When m <= 0 the lambda0 window
/// is evaluated at m_min. Throws std::domain_error("inconsistent exponents")
/// when a window is empty.
ExponentWindows derived_exponents(const PhysicalParameters& p, double alpha,
                                  int m = -1);

}  // namespace vacns
