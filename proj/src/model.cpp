#include "vacns/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace vacns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double real_pow(double base, double e) {
  if (base < 0.0) throw std::domain_error("negative base in real power");
  if (base < 1e-300) return 0.0;
  return std::exp(e * std::log(base));
}

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlNode[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double gl16(const Profile& f, double x0, double x1) {
  const double c = 0.5 * (x0 + x1);
  const double hw = 0.5 * (x1 - x0);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    acc += kGlWeight[i] *
           (f.value(c - hw * kGlNode[i]) + f.value(c + hw * kGlNode[i]));
  }
  return acc * hw;
}

}  // namespace

double Profile::mean(double x0, double x1) const {
  if (!(x1 > x0)) throw std::invalid_argument("profile mean needs x1 > x0");
  // Composite quadrature; subdivision tames mildly singular endpoints.
  constexpr int kPieces = 8;
  const double w = (x1 - x0) / kPieces;
  double acc = 0.0;
  for (int k = 0; k < kPieces; ++k) {
    acc += gl16(*this, x0 + k * w, x0 + (k + 1) * w);
  }
  return acc / (x1 - x0);
}

double pressure(double rho, const PhysicalParameters& p) {
  if (rho < 0.0) throw std::domain_error("pressure: negative density");
  return real_pow(rho, p.gamma);
}

double viscosity_mu(double rho, const PhysicalParameters& p) {
  if (rho < 0.0) throw std::domain_error("viscosity_mu: negative density");
  return p.c1 * real_pow(rho, p.theta);
}

double viscosity_lambda(double rho, const PhysicalParameters& p) {
  if (rho < 0.0) throw std::domain_error("viscosity_lambda: negative density");
  return p.c2 * real_pow(rho, p.theta);
}

namespace {

class PowerProfile final : public Profile {
 public:
  PowerProfile(double coef, double alpha) : coef_(coef), alpha_(alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("power profile needs alpha > 0");
  }
  double value(double x) const override {
    return coef_ * real_pow(std::max(0.0, 1.0 - x), alpha_);
  }
  double derivative(double x) const override {
    const double s = std::max(0.0, 1.0 - x);
    if (s == 0.0) return alpha_ >= 1.0 ? 0.0 : -kInf * (coef_ > 0 ? 1.0 : -1.0);
    return -coef_ * alpha_ * real_pow(s, alpha_ - 1.0);
  }
  double mean(double x0, double x1) const override {
    // Exact antiderivative of (1-x)^alpha.
    const double p1 = alpha_ + 1.0;
    const double s0 = std::max(0.0, 1.0 - x0);
    const double s1 = std::max(0.0, 1.0 - x1);
    return coef_ * (real_pow(s0, p1) - real_pow(s1, p1)) / (p1 * (x1 - x0));
  }
  std::string describe() const override {
    std::ostringstream os;
    os << coef_ << "*(1-x)^" << alpha_;
    return os.str();
  }

 private:
  double coef_, alpha_;
};

class PolynomialProfile final : public Profile {
 public:
  explicit PolynomialProfile(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.push_back(0.0);
  }
  double value(double x) const override {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }
  double derivative(double x) const override {
    double acc = 0.0;
    for (size_t k = c_.size(); k-- > 1;) acc = acc * x + c_[k] * double(k);
    return acc;
  }
  double mean(double x0, double x1) const override {
    // Exact antiderivative.
    auto anti = [&](double x) {
      double acc = 0.0;
      for (size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k] / double(k + 1);
      return acc * x;
    };
    return (anti(x1) - anti(x0)) / (x1 - x0);
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "poly[";
    for (size_t k = 0; k < c_.size(); ++k) os << (k ? " " : "") << c_[k];
    os << "]";
    return os.str();
  }

 private:
  std::vector<double> c_;
};

class TableProfile final : public Profile {
 public:
  TableProfile(std::vector<double> xs, std::vector<double> vs)
      : xs_(std::move(xs)), vs_(std::move(vs)) {
    if (xs_.size() != vs_.size() || xs_.size() < 2)
      throw std::invalid_argument("table profile needs >= 2 matching samples");
    for (size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1]))
        throw std::invalid_argument("table profile abscissae must increase");
    if (xs_.front() > 0.0 || xs_.back() < 1.0)
      throw std::invalid_argument("table profile must span [0,1]");
  }
  double value(double x) const override {
    const size_t i = segment(x);
    const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return vs_[i] + w * (vs_[i + 1] - vs_[i]);
  }
  double derivative(double x) const override {
    const size_t i = segment(x);
    return (vs_[i + 1] - vs_[i]) / (xs_[i + 1] - xs_[i]);
  }
  double mean(double x0, double x1) const override {
    // Exact integral of the piecewise-linear interpolant.
    double acc = 0.0;
    double lo = x0;
    while (lo < x1) {
      const size_t i = segment(lo);
      const double hi = std::min(x1, xs_[i + 1]);
      acc += 0.5 * (value(lo) + value(hi)) * (hi - lo);
      if (hi >= x1) break;
      lo = hi;
    }
    return acc / (x1 - x0);
  }
  std::string describe() const override {
    std::ostringstream os;
    os << "table[" << xs_.size() << " samples]";
    return os.str();
  }

 private:
  size_t segment(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    size_t i = size_t(std::distance(xs_.begin(), it));
    if (i == 0) return 0;
    if (i >= xs_.size()) return xs_.size() - 2;
    return i - 1;
  }
  std::vector<double> xs_, vs_;
};

class BumpProfile final : public Profile {
 public:
  BumpProfile(ProfilePtr base, double eps) : base_(std::move(base)), eps_(eps) {}
  double value(double x) const override {
    return base_->value(x) * (1.0 + eps_ * x * (1.0 - x));
  }
  double derivative(double x) const override {
    return base_->derivative(x) * (1.0 + eps_ * x * (1.0 - x)) +
           base_->value(x) * eps_ * (1.0 - 2.0 * x);
  }
  std::string describe() const override {
    std::ostringstream os;
    os << base_->describe() << "*(1+" << eps_ << "*x*(1-x))";
    return os.str();
  }

 private:
  ProfilePtr base_;
  double eps_;
};

class WaveProfile final : public Profile {
 public:
  WaveProfile(ProfilePtr base, double eps) : base_(std::move(base)), eps_(eps) {}
  double value(double x) const override {
    return base_->value(x) + eps_ * std::sin(std::numbers::pi * x);
  }
  double derivative(double x) const override {
    return base_->derivative(x) +
           eps_ * std::numbers::pi * std::cos(std::numbers::pi * x);
  }
  double mean(double x0, double x1) const override {
    const double pi = std::numbers::pi;
    return base_->mean(x0, x1) +
           eps_ * (std::cos(pi * x0) - std::cos(pi * x1)) / (pi * (x1 - x0));
  }
  std::string describe() const override {
    std::ostringstream os;
    os << base_->describe() << "+" << eps_ << "*sin(pi*x)";
    return os.str();
  }

 private:
  ProfilePtr base_;
  double eps_;
};

}  // namespace

ProfilePtr power_profile(double coef, double alpha) {
  return std::make_shared<PowerProfile>(coef, alpha);
}

ProfilePtr polynomial_profile(std::vector<double> coeffs) {
  return std::make_shared<PolynomialProfile>(std::move(coeffs));
}

ProfilePtr table_profile(std::vector<double> xs, std::vector<double> vals) {
  return std::make_shared<TableProfile>(std::move(xs), std::move(vals));
}

ProfilePtr bump_perturbed(ProfilePtr base, double eps) {
  return std::make_shared<BumpProfile>(std::move(base), eps);
}

ProfilePtr wave_perturbed(ProfilePtr base, double eps) {
  return std::make_shared<WaveProfile>(std::move(base), eps);
}

ForceModel ForceModel::zero() {
  ForceModel m;
  m.kind = "zero";
  m.f = nullptr;
  m.envelope = nullptr;
  return m;
}

ForceModel ForceModel::radial(double amplitude, double decay,
                              double core_radius) {
  ForceModel m;
  m.kind = "radial";
  m.f = [amplitude, decay, core_radius](double r, double t) {
    return amplitude * std::exp(-decay * t) * (core_radius / r);
  };
  m.envelope = [amplitude, decay](double t) {
    return std::abs(amplitude) * std::exp(-decay * t);
  };
  return m;
}

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

const Check* ValidationReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

namespace {

// Midpoint-rule integral over [0,1) at the given resolution; tolerates
// integrable endpoint singularities.
template <typename F>
double midpoint_integral(F&& f, int samples) {
  double acc = 0.0;
  const double w = 1.0 / samples;
  for (int k = 0; k < samples; ++k) acc += f((k + 0.5) * w);
  return acc * w;
}

// A positive integrand is flagged suspect when doubling the resolution
// still grows the midpoint sum noticeably: convergent tails settle while
// non-integrable endpoint blowup keeps inflating the refined sum.
bool suspect_divergent(double coarse, double fine) {
  if (!std::isfinite(fine) || !std::isfinite(coarse)) return true;
  return fine > 1.05 * coarse + 1e-12;
}

struct IntegralVerdict {
  double value = 0.0;
  bool finite = true;
};

template <typename F>
IntegralVerdict probe_integral(F&& f, int samples) {
  const double coarse = midpoint_integral(f, samples / 2);
  const double fine = midpoint_integral(f, samples);
  return {fine, !suspect_divergent(coarse, fine)};
}

double safe_recip(double x) { return x > 0.0 ? 1.0 / x : kInf; }

// L2 probe of the initial stress balance
//   ((2c1+c2) rho0^{theta+1} (r0^{n-1} u0)')' - 2c1(n-1) (u0/r0) (rho0^theta)'
// with r0 accumulated from the radius law and the outer derivative taken by
// centered differences.
IntegralVerdict compatibility_l2(const PhysicalParameters& p,
                                 const InitialData& data, int samples) {
  const auto& rho0 = *data.rho0;
  const auto& u0 = *data.u0;

  // Cumulative integral of 1/rho0 on a fine grid, midpoint rule per strip
  // so the vacuum endpoint is never evaluated.
  constexpr int kStrips = 4096;
  std::vector<double> cum(kStrips + 1, 0.0);
  const double w = 1.0 / kStrips;
  for (int k = 0; k < kStrips; ++k) {
    const double rho = rho0.value((k + 0.5) * w);
    cum[k + 1] = cum[k] + (rho > 0.0 ? w / rho : kInf);
  }
  auto radius = [&, an = real_pow(p.a, double(p.n))](double x) {
    const double s = std::clamp(x, 0.0, 1.0) * kStrips;
    const int k = std::min(int(s), kStrips - 1);
    const double c = cum[k] + (s - k) * (cum[k + 1] - cum[k]);
    return real_pow(an + p.n * c, 1.0 / p.n);
  };

  auto flux = [&](double x) {
    const double r = radius(x);
    const double rho = rho0.value(x);
    const double rp = rho > 0.0 ? 1.0 / (real_pow(r, double(p.n - 1)) * rho) : kInf;
    const double d =
        (p.n - 1) * real_pow(r, double(p.n - 2)) * rp * u0.value(x) +
        real_pow(r, double(p.n - 1)) * u0.derivative(x);
    return (2.0 * p.c1 + p.c2) * real_pow(rho, p.theta + 1.0) * d;
  };

  const double delta = 0.4 / samples;
  auto integrand = [&](double x) {
    const double gp = (flux(x + delta) - flux(x - delta)) / (2.0 * delta);
    const double visc_grad = p.theta *
                             real_pow(rho0.value(x), p.theta - 1.0) *
                             rho0.derivative(x);
    const double e =
        gp - 2.0 * p.c1 * (p.n - 1) * (u0.value(x) / radius(x)) * visc_grad;
    return e * e;
  };
  return probe_integral(integrand, samples);
}

}  // namespace

ValidationReport validate_assumptions(const PhysicalParameters& p,
                                      const InitialData& data,
                                      const ForceModel& force) {
  ValidationReport rep;
  auto push = [&rep](std::string name, bool pass, double lhs, double rhs,
                     std::string note = "") {
    rep.checks.push_back({std::move(name), pass, lhs, rhs, std::move(note)});
  };

  // Constitutive constraints.
  push("dimension n >= 2", p.n >= 2, double(p.n), 2.0);
  push("core radius a > 0", p.a > 0.0, p.a, 0.0);
  push("c1 > 0", p.c1 > 0.0, p.c1, 0.0);
  push("2*c1 + n*c2 > 0", 2.0 * p.c1 + p.n * p.c2 > 0.0,
       2.0 * p.c1 + p.n * p.c2, 0.0);
  push("theta > 0", p.theta > 0.0, p.theta, 0.0);
  push("theta < gamma", p.theta < p.gamma, p.theta, p.gamma);
  push("gamma > 1", p.gamma > 1.0, p.gamma, 1.0);

  // Decay-exponent window for alpha.
  const double alpha_lo = 1.0 / (2.0 * p.gamma);
  const double alpha_hi =
      std::min(3.0 / (4.0 * p.theta), 1.0 / (p.theta + 1.0));
  push("alpha > 1/(2*gamma)", data.alpha > alpha_lo, data.alpha, alpha_lo);
  push("alpha < min(3/(4*theta), 1/(theta+1))", data.alpha < alpha_hi,
       data.alpha, alpha_hi);
  push("alpha*(theta-1) < 1/2", data.alpha * (p.theta - 1.0) < 0.5,
       data.alpha * (p.theta - 1.0), 0.5);

  // Initial density sandwich A(1-x)^alpha <= rho0 <= B(1-x)^alpha.
  push("sandwich constants 0 < A <= B", data.A > 0.0 && data.A <= data.B,
       data.A, data.B);
  if (data.rho0) {
    constexpr int kSamples = 10000;
    double worst_lo = kInf, worst_hi = kInf;
    for (int k = 0; k < kSamples; ++k) {
      const double x = (k + 0.5) / kSamples;
      const double envelope = real_pow(1.0 - x, data.alpha);
      const double rho = data.rho0->value(x);
      const double slack = 1e-12 * std::max(1.0, std::abs(rho));
      worst_lo = std::min(worst_lo, rho - data.A * envelope + slack);
      worst_hi = std::min(worst_hi, data.B * envelope - rho + slack);
    }
    push("rho0 >= A*(1-x)^alpha", worst_lo >= 0.0, worst_lo, 0.0);
    push("rho0 <= B*(1-x)^alpha", worst_hi >= 0.0, worst_hi, 0.0);
  }

  // Windows for the derived exponents.
  const double a0_lo = 1.0 - 2.0 * data.alpha * p.theta;
  const double a0_hi =
      std::min(1.0, 1.0 + 2.0 * data.alpha - 2.0 * data.alpha * p.theta);
  push("alpha0 window nonempty", a0_lo < a0_hi, a0_lo, a0_hi);
  push("alpha0 > 1 - 2*alpha*theta", data.alpha0 > a0_lo, data.alpha0, a0_lo);
  push("alpha0 < min(1, 1 + 2*alpha*(1-theta))", data.alpha0 < a0_hi,
       data.alpha0, a0_hi);

  const double mmax =
      std::max({safe_recip(1.0 + data.alpha * p.theta - data.alpha),
                safe_recip(2.0 * (1.0 - p.theta * data.alpha)),
                safe_recip(4.0 - 4.0 * data.alpha), 2.0});
  push("m above its lower bound", double(data.m) > mmax, double(data.m), mmax);

  const double l0_hi =
      std::min(4.0 * data.m / (4.0 * data.m * data.alpha + 1.0),
               safe_recip(data.alpha * (1.0 + p.theta)));
  push("lambda0 window nonempty", 1.0 < l0_hi, 1.0, l0_hi);
  push("lambda0 > 1", data.lambda0 > 1.0, data.lambda0, 1.0);
  push("lambda0 < min(4m/(4m*alpha+1), 1/(alpha*(1+theta)))",
       data.lambda0 < l0_hi, data.lambda0, l0_hi);

  // Integrability of the initial data, probed by refinement of midpoint
  // sums on [0,1).
  if (data.rho0 && data.u0) {
    constexpr int kSamples = 10000;
    const auto& rho0 = *data.rho0;
    const auto& u0 = *data.u0;

    double sup_u = 0.0;
    for (int k = 0; k < kSamples; ++k)
      sup_u = std::max(sup_u, std::abs(u0.value((k + 0.5) / kSamples)));
    push("u0 bounded", std::isfinite(sup_u), sup_u, kInf);

    auto kinetic_visc = [&](double x) {
      const double d = u0.derivative(x);
      return real_pow(rho0.value(x), 1.0 + p.theta) * d * d;
    };
    const auto iv1 = probe_integral(kinetic_visc, kSamples);
    push("rho0^(1+theta)*(u0')^2 integrable", iv1.finite, iv1.value, kInf);

    auto pressure_grad = [&](double x) {
      const double g =
          p.gamma * real_pow(rho0.value(x), p.gamma - 1.0) * rho0.derivative(x);
      return g * g;
    };
    const auto iv2 = probe_integral(pressure_grad, kSamples);
    push("(rho0^gamma)' square integrable", iv2.finite, iv2.value, kInf);

    auto weighted_visc_grad = [&](double x) {
      const double g =
          p.theta * real_pow(rho0.value(x), p.theta - 1.0) * rho0.derivative(x);
      return real_pow(1.0 - x, data.alpha0) * g * g;
    };
    const auto iv3 = probe_integral(weighted_visc_grad, kSamples);
    push("(1-x)^alpha0*((rho0^theta)')^2 integrable", iv3.finite, iv3.value,
         kInf);

    const auto iv4 = compatibility_l2(p, data, kSamples);
    push("initial stress balance square integrable", iv4.finite, iv4.value,
         kInf);
  }

  // Spot check the force envelope.
  if (force.f) {
    double worst = 0.0;
    for (int i = 0; i < 16; ++i) {
      for (int k = 0; k < 16; ++k) {
        const double r = p.a * (1.0 + 3.0 * i / 15.0);
        const double t = k / 15.0;
        worst = std::max(worst, std::abs(force(r, t)) - force.bound(t));
      }
    }
    push("force within envelope", worst <= 1e-12, worst, 0.0);
  }

  return rep;
}

ExponentWindows derived_exponents(const PhysicalParameters& p, double alpha,
                                  int m) {
  ExponentWindows w;
  w.beta = p.beta();
  w.alpha_lo = 1.0 / (2.0 * p.gamma);
  w.alpha_hi = std::min(3.0 / (4.0 * p.theta), 1.0 / (p.theta + 1.0));
  if (p.theta > 1.0)
    w.alpha_hi = std::min(w.alpha_hi, 0.5 / (p.theta - 1.0));
  if (!(w.alpha_lo < w.alpha_hi))
    throw std::domain_error("inconsistent exponents: empty alpha window");

  w.alpha0_lo = 1.0 - 2.0 * alpha * p.theta;
  w.alpha0_hi = std::min(1.0, 1.0 + 2.0 * alpha - 2.0 * alpha * p.theta);
  if (!(w.alpha0_lo < w.alpha0_hi))
    throw std::domain_error("inconsistent exponents: empty alpha0 window");
  w.alpha0_default = 0.5 * (w.alpha0_lo + w.alpha0_hi);

  const double mmax = std::max({safe_recip(1.0 + alpha * p.theta - alpha),
                                safe_recip(2.0 * (1.0 - p.theta * alpha)),
                                safe_recip(4.0 - 4.0 * alpha), 2.0});
  if (!std::isfinite(mmax))
    throw std::domain_error("inconsistent exponents: m unbounded");
  w.m_min = int(std::floor(mmax)) + 1;

  const int m_eff = m > 0 ? m : w.m_min;
  w.lambda0_lo = 1.0;
  w.lambda0_hi = std::min(4.0 * m_eff / (4.0 * m_eff * alpha + 1.0),
                          safe_recip(alpha * (1.0 + p.theta)));
  if (!(w.lambda0_lo < w.lambda0_hi))
    throw std::domain_error("inconsistent exponents: empty lambda0 window");
  w.lambda0_default = 0.5 * (w.lambda0_lo + w.lambda0_hi);
  return w;
}

}  // namespace vacns
