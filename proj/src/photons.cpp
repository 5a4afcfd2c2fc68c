#include "catchannel/photons.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "catchannel/diagnostics.hpp"
#include "catchannel/errors.hpp"
#include "catchannel/log_complex.hpp"
#include "catchannel/special_functions.hpp"

namespace catchannel {

double FockAmplitudes::mean_photons() const {
  double mean = 0.0;
  for (Eigen::Index n = 0; n < amps.size(); ++n) mean += static_cast<double>(n) * std::norm(amps(n));
  return mean;
}

FockAmplitudes squeezed_coherent_amps(std::complex<double> alpha0, double r, double xi, int cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
  if (!(r >= 0.0)) throw InvalidArgument("r must be >= 0");

  FockAmplitudes out;
  out.cutoff = cutoff;
  out.amps.resize(cutoff);
  const double a2 = std::norm(alpha0);

  if (r <= kSqueezeEpsilon) {
    const LogComplexd log_alpha = LogComplexd::from_complex(alpha0);
    for (int n = 0; n < cutoff; ++n) {
      if (n > 0 && log_alpha.is_zero()) {
        out.amps(n) = 0.0;
        continue;
      }
      const double log_mag = -0.5 * a2 + n * (n > 0 ? log_alpha.log_mag() : 0.0) -
                             0.5 * std::lgamma(n + 1.0);
      out.amps(n) = std::polar(std::exp(log_mag), n * log_alpha.phase());
    }
  } else {
    const double mu = std::cosh(r);
    const double sm = std::sqrt(mu * mu - 1.0);
    const double ratio = sm / (2.0 * mu);
    const std::complex<double> arg = alpha0 * std::polar(1.0, -xi / 2.0) / std::sqrt(2.0 * mu * sm);
    const std::complex<double> base =
        -0.5 * a2 + ratio * std::polar(1.0, -xi) * alpha0 * alpha0 - 0.5 * std::log(mu);
    const int max_degree = std::max(kDefaultMaxDegree, cutoff);
    for (int n = 0; n < cutoff; ++n) {
      const std::complex<double> ex =
          base + std::complex<double>(0.5 * n * std::log(ratio) - 0.5 * std::lgamma(n + 1.0),
                                      0.5 * n * xi);
      out.amps(n) = hermite_log(n, arg, max_degree).times_exp(ex).to_complex();
    }
  }
  out.tail_bound = 1.0 - out.amps.squaredNorm();
  if (out.tail_bound > 1e-10) {
    std::ostringstream msg;
    msg << "cutoff " << cutoff << " leaves tail " << out.tail_bound;
    diag::warn("photons", msg.str());
  }
  return out;
}

Eigen::VectorXd amplified_number_state(int n, double g, int j_max) {
  if (n < 0 || j_max < 0) throw InvalidArgument("n and j_max must be non-negative");
  if (!(g >= 1.0)) throw InvalidArgument("g must be >= 1");
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(j_max + 1);
  const double ratio = std::sqrt(g * g - 1.0) / g;
  if (ratio == 0.0) {
    coef(0) = 1.0;
    return coef;
  }
  for (int j = 0; j <= j_max; ++j) {
    const double log_mag = -(n + 1.0) * std::log(g) +
                           0.5 * (std::lgamma(j + n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n + 1.0)) +
                           j * std::log(ratio);
    coef(j) = ((j % 2 == 0) ? 1.0 : -1.0) * std::exp(log_mag);
  }
  return coef;
}

double idler_mean_general(const FockAmplitudes& amps, double g) {
  double sum = 0.0;
  for (Eigen::Index n = 0; n < amps.amps.size(); ++n) sum += (1.0 + n) * std::norm(amps.amps(n));
  return (g * g - 1.0) * sum;
}

double squeezed_coherent_mean(std::complex<double> alpha0, double r, double xi) {
  // (2mu^2-1)|a|^2 + mu^2 - 1 - mu sqrt(mu^2-1) (e^{-i xi} a^2 + c.c.), rewritten as
  // |a|^2 (e^{-2r} + sinh(2r) (1 - cos(2 arg a - xi))) + sinh^2 r so the near-
  // cancellation at the optimal xi never forms a difference of large terms.
  const double a2 = std::norm(alpha0);
  const double half_angle = 0.5 * (2.0 * std::arg(alpha0) - xi);
  const double one_minus_cos = 2.0 * std::sin(half_angle) * std::sin(half_angle);
  const double sh = std::sinh(r);
  return a2 * (std::exp(-2.0 * r) + std::sinh(2.0 * r) * one_minus_cos) + sh * sh;
}

double idler_mean_closed(std::complex<double> alpha0, double r, double xi, double g) {
  return (g * g - 1.0) * (squeezed_coherent_mean(alpha0, r, xi) + 1.0);
}

double env_mean(std::complex<double> alpha0, double r, double xi, double t) {
  return (1.0 - t * t) * squeezed_coherent_mean(alpha0, r, xi);
}

}  // namespace catchannel
