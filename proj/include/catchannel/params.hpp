#pragma once

#include <complex>
#include <numbers>
#include <string_view>

#include "catchannel/log_complex.hpp"

namespace catchannel {

/// Input cat: (|alpha0 e^{i phi}> + e^{i theta} |alpha0 e^{-i phi}>) / 2.
struct CatParams {
  std::complex<double> alpha0{0.0, 0.0};
  double phi = std::numbers::pi / 2;
  double theta = 0.0;

  void validate() const;
};

/// Squeeze (r, xi) -> loss (amplitude transmission t) -> amplifier (gain g)
/// -> anti-squeeze.
struct ChannelParams {
  double r = 0.0;
  double xi = std::numbers::pi;
  double t = 1.0;
  double g = 1.0;

  double mu() const;
  /// mu^2 g^2 - t^2 (mu^2 - 1); strictly positive for valid parameters.
  double denominator() const;
  void validate() const;
};

/// Which cat component a term belongs to: sigma = +phi or sigma = -phi.
enum class Branch { plus, minus };

double branch_angle(const CatParams& cat, Branch branch);

/// Squeeze orientation aligned with the cat components: 2 arg(alpha0 e^{i phi}).
/// For phi = pi/2 this is pi + 2 arg(alpha0). Minimizes the idler photon
/// number of either component when phi = pi/2.
double default_xi(const CatParams& cat);

struct VisibilityReport {
  double visibility = 0.0;
  /// log(visibility); finite even when visibility underflows a double.
  double log_visibility = 0.0;
  LogComplexd p_max;
  LogComplexd p_min;
  /// Probability at the cat's own theta.
  LogComplexd p_at_theta;
  /// Theta-free cross integral X0 of the (+phi, -phi) term.
  LogComplexd branch_cross;
  /// D0 = P(+phi,+phi) + P(-phi,-phi).
  LogComplexd diagonal;
  double theta_max = 0.0;
  double theta_min = 0.0;
};

/// Assembles a report from D0 and X0: P(theta) = D0 + 2 Re(e^{i theta} X0).
VisibilityReport make_visibility_report(const LogComplexd& diagonal, const LogComplexd& cross,
                                        double theta, std::string_view module);

/// P(theta) in log-domain from D0 and X0, clamped at zero.
LogComplexd probability_from_parts(const LogComplexd& diagonal, const LogComplexd& cross,
                                   double theta, std::string_view module);

}  // namespace catchannel
