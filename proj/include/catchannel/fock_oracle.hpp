#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>

#include "catchannel/params.hpp"

namespace catchannel {

struct FockCutoffs {
  int signal = 32;
  int environment = 32;
  int idler = 32;
};

enum class Mode { signal, environment, idler };
enum class Direction { forward, inverse };

/// Truncated three-mode number-basis state. Amplitudes are stored flat with
/// index (n_s * N_e + n_e) * N_i + n_i.
class FockState {
 public:
  FockState(FockCutoffs cutoffs, Eigen::VectorXcd amps, double norm_defect = 0.0);

  /// signal (x) |0>_e (x) |0>_i
  static FockState from_signal(const Eigen::VectorXcd& signal, FockCutoffs cutoffs,
                               double norm_defect = 0.0);

  const FockCutoffs& cutoffs() const { return cutoffs_; }
  const Eigen::VectorXcd& amps() const { return amps_; }
  Eigen::VectorXcd& amps() { return amps_; }
  /// Accumulated truncation leakage estimate: the input tail plus, for
  /// every applied operator, the population left in the top level of each
  /// mode it acted on.
  double norm_defect() const { return norm_defect_; }
  void add_norm_defect(double d) { norm_defect_ += d; }

  std::complex<double> at(int s, int e, int i) const {
    return amps_((static_cast<Eigen::Index>(s) * cutoffs_.environment + e) * cutoffs_.idler + i);
  }
  double norm_squared() const { return amps_.squaredNorm(); }

 private:
  FockCutoffs cutoffs_;
  Eigen::VectorXcd amps_;
  double norm_defect_;
};

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!), n < cutoff. Warns if the tail exceeds 1e-10.
Eigen::VectorXcd build_coherent(std::complex<double> alpha, int cutoff);

/// exp((r/2)(e^{-i xi} a^2 - e^{i xi} a^dag^2)) on `mode`; inverse applies the adjoint.
FockState apply_squeeze(const FockState& state, double r, double xi, Mode mode = Mode::signal,
                        Direction direction = Direction::forward);

/// exp(i delta (a^dag b + a b^dag)) on (signal, environment), t = cos delta.
FockState apply_beamsplitter(const FockState& state, double t,
                             Direction direction = Direction::forward);

/// exp(lambda (a c - a^dag c^dag)) on (signal, idler), g = cosh lambda.
FockState apply_tms(const FockState& state, double g, Direction direction = Direction::forward);

/// exp(i sigma a^dag a) on the signal.
FockState apply_phase_branch(const FockState& state, double sigma);

/// sum n |amp|^2 over the chosen mode.
double mode_mean(const FockState& state, Mode mode);

/// Signal cutoff (mu g (|alpha0| + 4))^2 plus room for the squeezed and
/// amplified tails, clamped to [32, 256]; idler sized for the thermal tail,
/// environment 32.
FockCutoffs default_cutoffs(const CatParams& cat, const ChannelParams& ch);

/// Domain the oracle is meant for: |alpha0| <= 3, r <= 1.5, g <= 1.5.
bool within_oracle_domain(const CatParams& cat, const ChannelParams& ch);

/// (zeta_sigma / 4) e^{-i sigma n} S^dag U_amp U_loss S |alpha0 e^{i sigma}>|0>|0>.
FockState oracle_branch_state(const CatParams& cat, const ChannelParams& ch, Branch branch,
                              const FockCutoffs& cutoffs);

struct ModeMeans {
  double signal = 0.0;
  double environment = 0.0;
  double idler = 0.0;
};

/// Mode photon numbers after U_amp U_loss S |amplitude>|0>|0>, before the
/// anti-squeeze.
ModeMeans oracle_channel_means(std::complex<double> amplitude, const ChannelParams& ch,
                               const FockCutoffs& cutoffs);

/// Visibility of the post-selected two-branch state by direct simulation.
/// Throws TruncationInadequate when a branch's norm defect exceeds 1e-8.
VisibilityReport oracle_visibility(const CatParams& cat, const ChannelParams& ch,
                                   std::optional<FockCutoffs> cutoffs = std::nullopt);

}  // namespace catchannel
