#include "catchannel/params.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "catchannel/diagnostics.hpp"
#include "catchannel/errors.hpp"

namespace catchannel {

void CatParams::validate() const {
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) {
    throw InvalidArgument("alpha0 must be finite");
  }
  if (!std::isfinite(phi)) throw InvalidArgument("phi must be finite");
  if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
}

double ChannelParams::mu() const { return std::cosh(r); }

double ChannelParams::denominator() const {
  const double m2 = mu() * mu();
  return m2 * g * g - t * t * (m2 - 1.0);
}

void ChannelParams::validate() const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("r must be a finite value >= 0");
  if (!std::isfinite(xi)) throw InvalidArgument("xi must be finite");
  if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in (0, 1]");
  if (!(g >= 1.0) || !std::isfinite(g)) throw InvalidArgument("g must be a finite value >= 1");
}

double branch_angle(const CatParams& cat, Branch branch) {
  return branch == Branch::plus ? cat.phi : -cat.phi;
}

double default_xi(const CatParams& cat) {
  // arg(0) = 0, so the vacuum input falls back to 2 phi
  return wrap_phase(2.0 * (std::arg(cat.alpha0) + cat.phi));
}

LogComplexd probability_from_parts(const LogComplexd& diagonal, const LogComplexd& cross,
                                   double theta, std::string_view module) {
  if (diagonal.is_zero()) return LogComplexd::zero();
  const double log_d = diagonal.log_mag();
  const double v = std::exp(std::log(2.0) + cross.log_mag() - log_d);
  const double x = cross.is_zero() ? 0.0 : v * std::cos(theta + cross.phase());
  if (1.0 + x <= 0.0) {
    if (1.0 + x < -1e-10) {
      std::ostringstream msg;
      msg << "probability clamped at zero (relative excursion " << (1.0 + x) << ")";
      diag::warn(module, msg.str());
    }
    return LogComplexd::zero();
  }
  return LogComplexd(log_d + std::log1p(x), 0.0);
}

VisibilityReport make_visibility_report(const LogComplexd& diagonal, const LogComplexd& cross,
                                        double theta, std::string_view module) {
  if (diagonal.is_zero() || !std::isfinite(diagonal.log_mag())) {
    throw DegenerateProbability("diagonal probability D0 is outside the log-domain range");
  }
  VisibilityReport rep;
  rep.diagonal = LogComplexd(diagonal.log_mag(), 0.0);
  rep.branch_cross = cross;
  const double log_d = diagonal.log_mag();
  rep.log_visibility = std::log(2.0) + cross.log_mag() - log_d;
  rep.visibility = std::exp(rep.log_visibility);
  rep.theta_max = wrap_phase(-cross.phase());
  rep.theta_min = wrap_phase(std::numbers::pi - cross.phase());
  rep.p_max = LogComplexd(log_d + std::log1p(rep.visibility), 0.0);
  if (rep.visibility < 1.0) {
    rep.p_min = LogComplexd(log_d + std::log1p(-rep.visibility), 0.0);
  } else {
    if (rep.visibility - 1.0 > 1e-10) {
      std::ostringstream msg;
      msg << "visibility " << rep.visibility << " exceeds 1; P_min clamped at zero";
      diag::warn(module, msg.str());
    }
    rep.p_min = LogComplexd::zero();
  }
  rep.p_at_theta = probability_from_parts(diagonal, cross, theta, module);
  return rep;
}

}  // namespace catchannel
