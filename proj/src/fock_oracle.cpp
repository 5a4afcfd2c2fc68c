#include "catchannel/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "catchannel/diagnostics.hpp"
#include "catchannel/errors.hpp"

namespace catchannel {
namespace {

using cd = std::complex<double>;
using Index = Eigen::Index;
using RowMajorMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int mode_cutoff(const FockCutoffs& c, Mode mode) {
  switch (mode) {
    case Mode::signal: return c.signal;
    case Mode::environment: return c.environment;
    case Mode::idler: return c.idler;
  }
  return 0;
}

/// Population of the top number level of `mode`.
double edge_population(const FockState& state, Mode mode) {
  const FockCutoffs& c = state.cutoffs();
  double sum = 0.0;
  for (int s = 0; s < c.signal; ++s) {
    for (int e = 0; e < c.environment; ++e) {
      for (int i = 0; i < c.idler; ++i) {
        const bool edge = (mode == Mode::signal && s == c.signal - 1) ||
                          (mode == Mode::environment && e == c.environment - 1) ||
                          (mode == Mode::idler && i == c.idler - 1);
        if (edge) sum += std::norm(state.at(s, e, i));
      }
    }
  }
  return sum;
}

/// Applies a single-mode operator (dim = cutoff of `mode`) along that axis.
void apply_single_mode(FockState& state, const Eigen::MatrixXcd& op, Mode mode) {
  const FockCutoffs& c = state.cutoffs();
  cd* data = state.amps().data();
  switch (mode) {
    case Mode::signal: {
      Eigen::Map<RowMajorMatrix> m(data, c.signal, static_cast<Index>(c.environment) * c.idler);
      m = (op * m).eval();
      break;
    }
    case Mode::environment: {
      const Index block = static_cast<Index>(c.environment) * c.idler;
      for (int s = 0; s < c.signal; ++s) {
        Eigen::Map<RowMajorMatrix> m(data + s * block, c.environment, c.idler);
        m = (op * m).eval();
      }
      break;
    }
    case Mode::idler: {
      Eigen::Map<RowMajorMatrix> m(data, static_cast<Index>(c.signal) * c.environment, c.idler);
      m = (m * op.transpose()).eval();
      break;
    }
  }
}

Eigen::MatrixXcd squeeze_generator(int n, double r, double xi) {
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n, n);
  const cd lower = -0.5 * r * std::polar(1.0, xi);  // coefficient of a^dag^2
  const cd upper = 0.5 * r * std::polar(1.0, -xi);  // coefficient of a^2
  for (int k = 0; k + 2 < n; ++k) {
    const double amp = std::sqrt((k + 1.0) * (k + 2.0));
    gen(k + 2, k) += lower * amp;  // a^dag^2 |k> = sqrt((k+1)(k+2)) |k+2>
    gen(k, k + 2) += upper * amp;  // a^2 |k+2> = sqrt((k+2)(k+1)) |k>
  }
  return gen;
}

}  // namespace

FockState::FockState(FockCutoffs cutoffs, Eigen::VectorXcd amps, double norm_defect)
    : cutoffs_(cutoffs), amps_(std::move(amps)), norm_defect_(norm_defect) {
  if (cutoffs_.signal < 1 || cutoffs_.environment < 1 || cutoffs_.idler < 1) {
    throw InvalidArgument("Fock cutoffs must be >= 1");
  }
  const Index size =
      static_cast<Index>(cutoffs_.signal) * cutoffs_.environment * cutoffs_.idler;
  if (amps_.size() != size) throw InvalidArgument("FockState: amplitude count does not match cutoffs");
}

FockState FockState::from_signal(const Eigen::VectorXcd& signal, FockCutoffs cutoffs,
                                 double norm_defect) {
  if (signal.size() != cutoffs.signal) throw InvalidArgument("signal vector does not match cutoff");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Index>(cutoffs.signal) *
                                                 cutoffs.environment * cutoffs.idler);
  const Index stride = static_cast<Index>(cutoffs.environment) * cutoffs.idler;
  for (int s = 0; s < cutoffs.signal; ++s) amps(s * stride) = signal(s);
  return FockState(cutoffs, std::move(amps), norm_defect);
}

Eigen::VectorXcd build_coherent(cd alpha, int cutoff) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be at least 1");
  Eigen::VectorXcd v(cutoff);
  const double a2 = std::norm(alpha);
  const double log_abs = std::log(std::abs(alpha));
  const double phase = std::arg(alpha);
  for (int n = 0; n < cutoff; ++n) {
    if (n > 0 && alpha == cd(0)) {
      v(n) = 0.0;
      continue;
    }
    const double log_mag = -0.5 * a2 + (n > 0 ? n * log_abs : 0.0) - 0.5 * std::lgamma(n + 1.0);
    v(n) = std::polar(std::exp(log_mag), n * phase);
  }
  const double tail = 1.0 - v.squaredNorm();
  if (tail > 1e-10) {
    std::ostringstream msg;
    msg << "coherent state |" << alpha << "> truncated at " << cutoff << " leaves tail " << tail;
    diag::warn("fock-oracle", msg.str());
  }
  return v;
}

FockState apply_squeeze(const FockState& state, double r, double xi, Mode mode, Direction direction) {
  if (!(r >= 0.0)) throw InvalidArgument("r must be >= 0");
  FockState out = state;
  if (r == 0.0) return out;
  const int n = mode_cutoff(state.cutoffs(), mode);
  Eigen::MatrixXcd gen = squeeze_generator(n, r, xi);
  if (direction == Direction::inverse) gen = -gen;
  const Eigen::MatrixXcd op = gen.exp();
  apply_single_mode(out, op, mode);
  out.add_norm_defect(edge_population(out, mode));
  return out;
}

FockState apply_beamsplitter(const FockState& state, double t, Direction direction) {
  if (!(t > 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in (0, 1]");
  FockState out = state;
  if (t == 1.0) return out;
  const FockCutoffs& c = state.cutoffs();
  const double delta = (direction == Direction::forward ? 1.0 : -1.0) * std::acos(t);
  const Index stride_s = static_cast<Index>(c.environment) * c.idler;

  // a^dag b + a b^dag conserves n_s + n_e; exponentiate each block.
  for (int total = 0; total <= c.signal + c.environment - 2; ++total) {
    const int s_lo = std::max(0, total - (c.environment - 1));
    const int s_hi = std::min(c.signal - 1, total);
    const int size = s_hi - s_lo + 1;
    if (size <= 0) continue;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(size, size);
    for (int k = 0; k < size; ++k) {
      const int s = s_lo + k, e = total - s;
      if (k + 1 < size) {
        // a^dag b |s, e> = sqrt((s+1) e) |s+1, e-1>
        const cd v(0.0, delta * std::sqrt((s + 1.0) * e));
        gen(k + 1, k) += v;
        gen(k, k + 1) += v;  // a b^dag is its transpose
      }
    }
    const Eigen::MatrixXcd op = gen.exp();
    Eigen::VectorXcd slice(size);
    for (int i = 0; i < c.idler; ++i) {
      for (int k = 0; k < size; ++k) {
        const int s = s_lo + k, e = total - s;
        slice(k) = state.amps()(s * stride_s + e * c.idler + i);
      }
      const Eigen::VectorXcd res = op * slice;
      for (int k = 0; k < size; ++k) {
        const int s = s_lo + k, e = total - s;
        out.amps()(s * stride_s + e * c.idler + i) = res(k);
      }
    }
  }
  out.add_norm_defect(edge_population(out, Mode::signal) + edge_population(out, Mode::environment));
  return out;
}

FockState apply_tms(const FockState& state, double g, Direction direction) {
  if (!(g >= 1.0)) throw InvalidArgument("g must be >= 1");
  FockState out = state;
  if (g == 1.0) return out;
  const FockCutoffs& c = state.cutoffs();
  const double lambda = (direction == Direction::forward ? 1.0 : -1.0) * std::acosh(g);
  const Index stride_s = static_cast<Index>(c.environment) * c.idler;

  // a c - a^dag c^dag conserves n_s - n_i.
  for (int diff = -(c.idler - 1); diff <= c.signal - 1; ++diff) {
    const int s_lo = std::max(0, diff);
    const int s_hi = std::min(c.signal - 1, c.idler - 1 + diff);
    const int size = s_hi - s_lo + 1;
    if (size <= 0) continue;
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(size, size);
    for (int k = 0; k + 1 < size; ++k) {
      const int s = s_lo + k, i = s - diff;
      const double amp = lambda * std::sqrt((s + 1.0) * (i + 1.0));
      gen(k + 1, k) -= amp;  // -a^dag c^dag |s, i> -> |s+1, i+1>
      gen(k, k + 1) += amp;  // a c |s+1, i+1> -> |s, i>
    }
    const Eigen::MatrixXcd op = gen.exp();
    Eigen::VectorXcd slice(size);
    for (int e = 0; e < c.environment; ++e) {
      for (int k = 0; k < size; ++k) {
        const int s = s_lo + k, i = s - diff;
        slice(k) = state.amps()(s * stride_s + e * c.idler + i);
      }
      const Eigen::VectorXcd res = op * slice;
      for (int k = 0; k < size; ++k) {
        const int s = s_lo + k, i = s - diff;
        out.amps()(s * stride_s + e * c.idler + i) = res(k);
      }
    }
  }
  out.add_norm_defect(edge_population(out, Mode::signal) + edge_population(out, Mode::idler));
  return out;
}

FockState apply_phase_branch(const FockState& state, double sigma) {
  FockState out = state;
  const FockCutoffs& c = state.cutoffs();
  const Index stride_s = static_cast<Index>(c.environment) * c.idler;
  for (int s = 0; s < c.signal; ++s) {
    out.amps().segment(s * stride_s, stride_s) *= std::polar(1.0, sigma * s);
  }
  return out;
}

double mode_mean(const FockState& state, Mode mode) {
  const FockCutoffs& c = state.cutoffs();
  double mean = 0.0;
  for (int s = 0; s < c.signal; ++s) {
    for (int e = 0; e < c.environment; ++e) {
      for (int i = 0; i < c.idler; ++i) {
        const int n = mode == Mode::signal ? s : (mode == Mode::environment ? e : i);
        mean += n * std::norm(state.at(s, e, i));
      }
    }
  }
  return mean;
}

FockCutoffs default_cutoffs(const CatParams& cat, const ChannelParams& ch) {
  const double amp = ch.mu() * ch.g * (std::abs(cat.alpha0) + 4.0);
  // the amplifier adds a geometric tail with ratio (g^2-1)/g^2; the factor 2
  // keeps the truncated generator's edge artifacts below 1e-12 too
  double thermal = 0.0;
  if (ch.g > 1.0) {
    const double q = (ch.g * ch.g - 1.0) / (ch.g * ch.g);
    thermal = std::ceil(2.0 * std::log(1e-12) / std::log(q));
  }
  // squeezed-vacuum populations fall off like tanh(r)^n
  const double squeezed = ch.r > 0.0 ? std::ceil(std::log(1e-12) / std::log(std::tanh(ch.r))) : 0.0;
  const int signal =
      static_cast<int>(std::clamp(std::ceil(amp * amp) + squeezed + thermal, 32.0, 256.0));
  const int idler = static_cast<int>(std::clamp(thermal, 32.0, 256.0));
  return {signal, 32, idler};
}

bool within_oracle_domain(const CatParams& cat, const ChannelParams& ch) {
  return std::abs(cat.alpha0) <= 3.0 && ch.r <= 1.5 && ch.g <= 1.5;
}

FockState oracle_branch_state(const CatParams& cat, const ChannelParams& ch, Branch branch,
                              const FockCutoffs& cutoffs) {
  cat.validate();
  ch.validate();
  const double sigma = branch_angle(cat, branch);
  const Eigen::VectorXcd input = build_coherent(cat.alpha0 * std::polar(1.0, sigma), cutoffs.signal);
  const double input_tail = std::max(0.0, 1.0 - input.squaredNorm());
  FockState state = FockState::from_signal(input, cutoffs, input_tail);
  state = apply_squeeze(state, ch.r, ch.xi, Mode::signal, Direction::forward);
  state = apply_beamsplitter(state, ch.t);
  state = apply_tms(state, ch.g);
  state = apply_squeeze(state, ch.r, ch.xi, Mode::signal, Direction::inverse);
  state = apply_phase_branch(state, -sigma);
  const cd zeta = branch == Branch::plus ? std::polar(1.0, cat.theta) : cd(1.0);
  state.amps() *= zeta / 4.0;
  return state;
}

ModeMeans oracle_channel_means(cd amplitude, const ChannelParams& ch, const FockCutoffs& cutoffs) {
  ch.validate();
  const Eigen::VectorXcd input = build_coherent(amplitude, cutoffs.signal);
  FockState state = FockState::from_signal(input, cutoffs, std::max(0.0, 1.0 - input.squaredNorm()));
  state = apply_squeeze(state, ch.r, ch.xi, Mode::signal, Direction::forward);
  state = apply_beamsplitter(state, ch.t);
  state = apply_tms(state, ch.g);
  if (state.norm_defect() > 1e-8) {
    std::ostringstream msg;
    msg << "norm defect " << state.norm_defect() << " exceeds 1e-8";
    throw TruncationInadequate(msg.str());
  }
  const double norm = state.norm_squared();
  return {mode_mean(state, Mode::signal) / norm, mode_mean(state, Mode::environment) / norm,
          mode_mean(state, Mode::idler) / norm};
}

VisibilityReport oracle_visibility(const CatParams& cat, const ChannelParams& ch,
                                   std::optional<FockCutoffs> cutoffs) {
  const FockCutoffs cut = cutoffs.value_or(default_cutoffs(cat, ch));
  CatParams stripped = cat;
  stripped.theta = 0.0;
  const FockState plus = oracle_branch_state(stripped, ch, Branch::plus, cut);
  const FockState minus = oracle_branch_state(stripped, ch, Branch::minus, cut);
  const double defect = std::max(plus.norm_defect(), minus.norm_defect());
  if (defect > 1e-8) {
    std::ostringstream msg;
    msg << "norm defect " << defect << " exceeds 1e-8 at cutoffs (" << cut.signal << ", "
        << cut.environment << ", " << cut.idler << ")";
    throw TruncationInadequate(msg.str());
  }
  const LogComplexd diagonal = LogComplexd::from_real(plus.norm_squared() + minus.norm_squared());
  const LogComplexd cross = LogComplexd::from_complex(minus.amps().dot(plus.amps()));
  return make_visibility_report(diagonal, cross, cat.theta, "fock-oracle");
}

}  // namespace catchannel
