#pragma once

#include <Eigen/Core>
#include <complex>

namespace catchannel {

/// Number-basis amplitudes c_0 .. c_{N-1} of a single-mode state.
struct FockAmplitudes {
  int cutoff = 0;
  Eigen::VectorXcd amps;
  /// 1 - sum |c_n|^2: probability outside the truncation.
  double tail_bound = 0.0;

  /// sum n |c_n|^2
  double mean_photons() const;
};

/// Below this squeeze the amplitudes use the coherent-state limit (the
/// Hermite form divides by sqrt(mu^2 - 1)).
inline constexpr double kSqueezeEpsilon = 1e-9;

/// Amplitudes of S(r, xi)|alpha0> via the Hermite-polynomial form.
/// Warns (does not throw) when the tail exceeds 1e-10.
FockAmplitudes squeezed_coherent_amps(std::complex<double> alpha0, double r, double xi, int cutoff);

/// Coefficients of U|n>_s|0>_i on |j+n>_s|j>_i, j = 0..j_max:
/// g^{-(n+1)} sqrt((j+n)! / (j! n!)) (-sqrt(g^2-1)/g)^j.
Eigen::VectorXd amplified_number_state(int n, double g, int j_max);

/// Idler mean after amplifying an arbitrary input: (g^2-1) sum (1+n)|c_n|^2.
double idler_mean_general(const FockAmplitudes& amps, double g);

/// Mean photon number of S(r, xi)|alpha0>.
double squeezed_coherent_mean(std::complex<double> alpha0, double r, double xi);

/// Idler mean after amplifying S(r, xi)|alpha0> with gain g (closed form).
double idler_mean_closed(std::complex<double> alpha0, double r, double xi, double g);

/// Photons reflected into the environment by the loss beam splitter:
/// (1 - t^2) times the squeezed-coherent mean.
double env_mean(std::complex<double> alpha0, double r, double xi, double t);

}  // namespace catchannel
