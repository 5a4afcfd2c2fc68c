#include "catchannel/analytic.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace catchannel {
namespace {

using cd = std::complex<double>;
using Kernel = GaussianKerneld;

constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};

/// Accumulates a quadratic exponent written in complex amplitudes z_k and
/// their conjugates, expanded over the real pairs (Re z_k, Im z_k).
class ComplexExponent {
 public:
  using Form = Kernel::Vector;

  explicit ComplexExponent(int complex_vars)
      : dim_(2 * complex_vars),
        a_(Kernel::Matrix::Zero(dim_, dim_)),
        b_(Kernel::Vector::Zero(dim_)) {}

  Form z(int k) const {
    Form f = Form::Zero(dim_);
    f(2 * k) = 1.0;
    f(2 * k + 1) = kI;
    return f;
  }
  Form zc(int k) const { return z(k).conjugate(); }

  /// q * u * v for linear forms u, v.
  void quadratic(cd q, const Form& u, const Form& v) { a_ += q * u * v.transpose(); }
  void linear(cd q, const Form& u) { b_ += q * u; }
  /// -|z_k|^2 / 2, the normalization carried by each coherent state.
  void half_norm(int k) { quadratic(-0.5, zc(k), z(k)); }
  void constant(cd q) { c_ += q; }

  Kernel kernel() const { return Kernel(a_, b_, LogComplexd::from_exponent(c_)); }

 private:
  Eigen::Index dim_;
  Kernel::Matrix a_;
  Kernel::Vector b_;
  cd c_{0.0, 0.0};
};

cd zeta(const CatParams& cat, Branch branch) {
  return branch == Branch::plus ? std::polar(1.0, cat.theta) : cd(1.0);
}

// complex variable slots
constexpr int kAlpha = 0;
constexpr int kBeta = 1;
constexpr int kGamma = 2;
constexpr int eps(int k) { return 2 + k; }  // k = 1..9

struct BranchParts {
  LogComplexd plus;   // integral of Q(+phi, +phi)
  LogComplexd minus;  // integral of Q(-phi, -phi)
  LogComplexd cross;  // integral of Q(+phi, -phi) with theta stripped
};

BranchParts branch_parts(const CatParams& cat, const ChannelParams& ch) {
  CatParams stripped = cat;
  stripped.theta = 0.0;
  const Kernel fp = branch_kernel(stripped, ch, Branch::plus);
  const Kernel fm = branch_kernel(stripped, ch, Branch::minus);
  const LogComplexd inv_pi3(-3.0 * std::log(kPi), 0.0);
  return {integral(conjugate(fp) * fp) * inv_pi3, integral(conjugate(fm) * fm) * inv_pi3,
          integral(conjugate(fm) * fp) * inv_pi3};
}

LogComplexd real_part(const LogComplexd& v) {
  // diagonal integrals are |f|^2 and real up to rounding
  return LogComplexd(v.log_mag(), 0.0);
}

}  // namespace

GaussianKerneld branch_integrand(const CatParams& cat, const ChannelParams& ch, Branch branch) {
  cat.validate();
  ch.validate();
  const double sigma = branch_angle(cat, branch);
  const double mu = ch.mu();
  const double pair = std::sqrt(mu * mu - 1.0) / (2.0 * mu);  // tanh(r) / 2
  const double kappa = std::sqrt(ch.g * ch.g - 1.0) / ch.g;
  const double s = std::sqrt(1.0 - ch.t * ch.t);
  const cd a0 = cat.alpha0 * std::polar(1.0, sigma);

  ComplexExponent e(12);

  // <alpha e^{i sigma}, beta, gamma| S^dag |e1, e2, e3>
  for (int k : {kAlpha, kBeta, kGamma, eps(1), eps(2), eps(3)}) e.half_norm(k);
  e.quadratic(std::polar(1.0 / mu, -sigma), e.zc(kAlpha), e.z(eps(1)));
  e.quadratic(pair * std::polar(1.0, ch.xi - 2.0 * sigma), e.zc(kAlpha), e.zc(kAlpha));
  e.quadratic(-pair * std::polar(1.0, -ch.xi), e.z(eps(1)), e.z(eps(1)));
  e.quadratic(1.0, e.zc(kBeta), e.z(eps(2)));
  e.quadratic(1.0, e.zc(kGamma), e.z(eps(3)));
  e.constant(-0.5 * std::log(mu));

  // <e1, e2, e3| U_amp |e4, e5, e6>, amplifier on signal and idler
  for (int k = 1; k <= 6; ++k) e.half_norm(eps(k));
  e.quadratic(1.0 / ch.g, e.zc(eps(1)), e.z(eps(4)));
  e.quadratic(1.0, e.zc(eps(2)), e.z(eps(5)));
  e.quadratic(1.0 / ch.g, e.zc(eps(3)), e.z(eps(6)));
  e.quadratic(-kappa, e.zc(eps(1)), e.zc(eps(3)));
  e.quadratic(kappa, e.z(eps(4)), e.z(eps(6)));
  e.constant(-std::log(ch.g));

  // <e4, e5, e6| U_loss |e7, e8, e9>: |x, y> -> |t x + i s y, t y + i s x>
  for (int k = 4; k <= 9; ++k) e.half_norm(eps(k));
  e.quadratic(ch.t, e.zc(eps(4)), e.z(eps(7)));
  e.quadratic(kI * s, e.zc(eps(4)), e.z(eps(8)));
  e.quadratic(ch.t, e.zc(eps(5)), e.z(eps(8)));
  e.quadratic(kI * s, e.zc(eps(5)), e.z(eps(7)));
  e.quadratic(1.0, e.zc(eps(6)), e.z(eps(9)));

  // <e7, e8, e9| S |alpha0 e^{i sigma}, 0, 0>
  for (int k = 7; k <= 9; ++k) e.half_norm(eps(k));
  e.linear(a0 / mu, e.zc(eps(7)));
  e.quadratic(-pair * std::polar(1.0, ch.xi), e.zc(eps(7)), e.zc(eps(7)));
  e.constant(-0.5 * std::norm(cat.alpha0) + pair * std::polar(1.0, -ch.xi) * a0 * a0);
  e.constant(-0.5 * std::log(mu));

  // zeta / 4 and one 1/pi per resolution of the identity
  e.constant(std::log(zeta(cat, branch) / 4.0) - 9.0 * std::log(kPi));
  return e.kernel();
}

GaussianKerneld branch_kernel(const CatParams& cat, const ChannelParams& ch, Branch branch) {
  std::vector<Eigen::Index> intermediate(18);
  std::iota(intermediate.begin(), intermediate.end(), Eigen::Index{6});
  return marginalize(branch_integrand(cat, ch, branch),
                     std::span<const Eigen::Index>(intermediate));
}

LogComplexd f_sigma_closed(const CatParams& cat, const ChannelParams& ch, Branch branch,
                           const PhasePoint& point, ClosedFormReading reading) {
  const bool literal = reading == ClosedFormReading::literal;
  const double sigma = branch_angle(cat, branch);
  const double mu = ch.mu(), g = ch.g, t = ch.t, xi = ch.xi;
  const double m2 = mu * mu;
  const double sm = std::sqrt(m2 - 1.0);
  const double sg = std::sqrt(g * g - 1.0);
  const double st = std::sqrt(1.0 - t * t);
  const double d = ch.denominator();
  const cd a0 = cat.alpha0;
  const cd al(point(0), point(1)), be(point(2), point(3)), ga(point(4), point(5));
  const cd alc = std::conj(al), bec = std::conj(be), gac = std::conj(ga);
  const auto ph = [](double x) { return std::polar(1.0, x); };

  cd ex = -(std::norm(al) + std::norm(be) + std::norm(ga) + std::norm(a0)) / 2.0;
  const cd a0_term = literal ? std::conj(a0) : a0 * a0;
  ex += mu * sm * (g * g - t * t) * ph(-(xi - 2 * sigma)) * a0_term / (2 * d);
  ex += mu * sm * (g * g - t * t) * ph(xi - 2 * sigma) * alc * alc / (2 * d);
  ex += (1 - t * t) * g * g * mu * sm * ph(xi) * bec * bec / (2 * d);
  ex += (literal ? 1.0 : -1.0) * mu * sm * (g * g - 1) * ph(-xi) * gac * gac / (2 * d);
  ex += t * g * alc * a0 / d;
  ex += kI * st * (literal ? g : g * g) * mu * ph(sigma) * bec * a0 / d;
  ex += t * sg * sm * ph(-(xi - sigma)) * gac * a0 / d;
  ex += -kI * t * st * g * sm * ph(xi - sigma) * alc * bec / d;
  ex += -mu * g * sg * ph(-sigma) * alc * gac / d;
  ex += -kI * t * st * sg * (m2 - 1) * bec * gac / d;

  const double prefactor =
      literal ? 4.0 * std::sqrt(m2 * g * g - t * t) * (m2 - 1.0) : 4.0 * std::sqrt(d);
  return LogComplexd::from_complex(zeta(cat, branch)).times_exp(ex - std::log(prefactor));
}

GaussianKerneld q_term(const CatParams& cat, const ChannelParams& ch, Branch sigma, Branch tau) {
  const Kernel k = conjugate(branch_kernel(cat, ch, tau)) * branch_kernel(cat, ch, sigma);
  return Kernel(k.quadratic(), k.linear(), k.constant().times_exp(cd(-3.0 * std::log(kPi), 0.0)));
}

LogComplexd log_probability(const CatParams& cat, const ChannelParams& ch, double theta) {
  const BranchParts parts = branch_parts(cat, ch);
  const LogComplexd diagonal = real_part(logc_sum<double>({parts.plus, parts.minus}));
  return probability_from_parts(diagonal, parts.cross, theta, "analytic");
}

double probability(const CatParams& cat, const ChannelParams& ch, double theta) {
  return log_probability(cat, ch, theta).magnitude();
}

VisibilityReport visibility(const CatParams& cat, const ChannelParams& ch) {
  const BranchParts parts = branch_parts(cat, ch);
  const LogComplexd diagonal = real_part(logc_sum<double>({parts.plus, parts.minus}));
  return make_visibility_report(diagonal, parts.cross, cat.theta, "analytic");
}

double visibility_theta_scan(const CatParams& cat, const ChannelParams& ch, int points) {
  if (points < 2) throw InvalidArgument("theta scan needs at least 2 points");
  double p_max = -1.0, p_min = 0.0;
  bool first = true;
  for (int k = 0; k < points; ++k) {
    CatParams at = cat;
    at.theta = 2.0 * kPi * k / points;
    std::vector<LogComplexd> terms;
    for (Branch s : {Branch::plus, Branch::minus}) {
      for (Branch t : {Branch::plus, Branch::minus}) terms.push_back(integral(q_term(at, ch, s, t)));
    }
    const double p = std::max(0.0, logc_sum<double>(terms).real());
    if (first || p > p_max) p_max = p;
    if (first || p < p_min) p_min = p;
    first = false;
  }
  return (p_max - p_min) / (p_max + p_min);
}

SignalQFunction::SignalQFunction(const CatParams& cat, const ChannelParams& ch) {
  const std::array<Eigen::Index, 4> env_and_idler{2, 3, 4, 5};
  std::size_t i = 0;
  for (Branch s : {Branch::plus, Branch::minus}) {
    for (Branch t : {Branch::plus, Branch::minus}) {
      terms_[i++] = marginalize(q_term(cat, ch, s, t), std::span<const Eigen::Index>(env_and_idler));
    }
  }
}

double SignalQFunction::operator()(double re, double im) const {
  const Eigen::Vector2d x(re, im);
  std::array<LogComplexd, 4> values;
  for (std::size_t i = 0; i < terms_.size(); ++i) values[i] = evaluate(terms_[i], x);
  return logc_sum(std::span<const LogComplexd>(values)).real();
}

}  // namespace catchannel
