#pragma once

#include <Eigen/Core>
#include <array>

#include "catchannel/gaussian_kernel.hpp"
#include "catchannel/params.hpp"

namespace catchannel {

/// Real coordinates of the three output coherent amplitudes:
/// (Re alpha, Im alpha, Re beta, Im beta, Re gamma, Im gamma) for the
/// signal, environment and idler modes.
using PhasePoint = Eigen::Matrix<double, 6, 1>;

/// f_sigma(alpha, beta, gamma) = zeta_sigma / 4 *
///   <alpha e^{i sigma}, beta, gamma| S^dag U_amp U_loss S |alpha0 e^{i sigma}, 0, 0>
/// as a 6-dimensional kernel. zeta_plus = e^{i theta}, zeta_minus = 1.
///
/// Built from coherent-state matrix elements of the four operators joined by
/// nine resolutions of the identity, giving a 24-dimensional kernel whose 18
/// intermediate dimensions are then integrated out.
GaussianKerneld branch_kernel(const CatParams& cat, const ChannelParams& ch, Branch branch);

/// The 24-dimensional integrand before the intermediate amplitudes are
/// integrated out. Variables 0..5 are the external point, 6..23 the nine
/// intermediate complex amplitudes as (re, im) pairs.
GaussianKerneld branch_integrand(const CatParams& cat, const ChannelParams& ch, Branch branch);

enum class ClosedFormReading {
  /// The closed form exactly as typeset, including its misprints.
  literal,
  /// Prefactor 1/(4 sqrt(D)), alpha0^2 exponent, minus sign on the gamma*^2
  /// term and g^2 in the beta* alpha0 term. Agrees with branch_kernel.
  corrected,
};

/// Pointwise closed-form f_sigma. Regression reference only.
LogComplexd f_sigma_closed(const CatParams& cat, const ChannelParams& ch, Branch branch,
                           const PhasePoint& point,
                           ClosedFormReading reading = ClosedFormReading::corrected);

/// Q_{sigma,tau} = conj(f_tau) f_sigma / pi^3.
GaussianKerneld q_term(const CatParams& cat, const ChannelParams& ch, Branch sigma, Branch tau);

/// Post-selection probability P(theta) = sum over the four Q terms.
double probability(const CatParams& cat, const ChannelParams& ch, double theta);
LogComplexd log_probability(const CatParams& cat, const ChannelParams& ch, double theta);

/// V = 2|X0| / D0 with the extremal probabilities taken analytically in theta.
VisibilityReport visibility(const CatParams& cat, const ChannelParams& ch);

/// Validation mode: P(theta) on `points` equally spaced theta values from
/// full (theta-dependent) kernels; V = (max - min) / (max + min).
double visibility_theta_scan(const CatParams& cat, const ChannelParams& ch, int points = 64);

/// Signal-mode Q-function: the four Q terms with beta and gamma integrated out.
class SignalQFunction {
 public:
  SignalQFunction(const CatParams& cat, const ChannelParams& ch);
  /// Sum of the four terms at alpha = re + i im (real up to rounding).
  double operator()(double re, double im) const;

 private:
  std::array<GaussianKerneld, 4> terms_;
};

}  // namespace catchannel
