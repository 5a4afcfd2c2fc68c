#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace catchannel {

/// Wraps an angle into (-pi, pi].
template <typename Real>
Real wrap_phase(Real phase) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  if (!std::isfinite(phase)) return phase;
  if (phase > -pi && phase <= pi) return phase;
  Real w = std::remainder(phase, 2 * pi);  // in [-pi, pi]
  if (w <= -pi) w += 2 * pi;
  return w;
}

/// A complex number held as (log-magnitude, phase). Exact zero is
/// log_mag = -inf with phase 0. The phase is always kept in (-pi, pi].
template <typename Real>
class LogComplex {
 public:
  using Complex = std::complex<Real>;

  LogComplex() : log_mag_(-std::numeric_limits<Real>::infinity()), phase_(0) {}
  LogComplex(Real log_mag, Real phase) { assign(log_mag, phase); }

  static LogComplex zero() { return LogComplex(); }
  static LogComplex one() { return LogComplex(Real(0), Real(0)); }

  /// exp(z) for a complex exponent z, without ever forming exp(Re z).
  static LogComplex from_exponent(const Complex& z) { return LogComplex(z.real(), z.imag()); }

  static LogComplex from_complex(const Complex& v) {
    if (v == Complex(0)) return zero();
    // log(|v|) via hypot keeps full range for tiny/huge components
    return LogComplex(std::log(std::hypot(v.real(), v.imag())), std::arg(v));
  }

  static LogComplex from_real(Real v) { return from_complex(Complex(v, 0)); }

  Real log_mag() const { return log_mag_; }
  Real phase() const { return phase_; }
  bool is_zero() const { return log_mag_ == -std::numeric_limits<Real>::infinity(); }

  Complex to_complex() const {
    if (is_zero()) return Complex(0);
    return std::polar(std::exp(log_mag_), phase_);
  }
  Real magnitude() const { return is_zero() ? Real(0) : std::exp(log_mag_); }
  /// Real part of the value. Underflows to 0 for very negative log_mag.
  Real real() const { return is_zero() ? Real(0) : std::exp(log_mag_) * std::cos(phase_); }
  /// exp(complex log) as a complex exponent; -inf real part for zero.
  Complex log() const { return Complex(log_mag_, phase_); }

  LogComplex conj() const { return is_zero() ? zero() : LogComplex(log_mag_, -phase_); }

  /// Multiplies by exp(z).
  LogComplex times_exp(const Complex& z) const {
    if (is_zero()) return zero();
    return LogComplex(log_mag_ + z.real(), phase_ + z.imag());
  }

  LogComplex& operator*=(const LogComplex& o) {
    if (is_zero() || o.is_zero()) {
      *this = zero();
    } else {
      assign(log_mag_ + o.log_mag_, phase_ + o.phase_);
    }
    return *this;
  }
  LogComplex& operator/=(const LogComplex& o) {
    if (is_zero()) return *this;
    assign(log_mag_ - o.log_mag_, phase_ - o.phase_);
    return *this;
  }
  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }

  friend bool operator==(const LogComplex& a, const LogComplex& b) {
    return a.log_mag_ == b.log_mag_ && a.phase_ == b.phase_;
  }

 private:
  void assign(Real log_mag, Real phase) {
    if (log_mag == -std::numeric_limits<Real>::infinity()) {
      log_mag_ = log_mag;
      phase_ = 0;
    } else {
      log_mag_ = log_mag;
      phase_ = wrap_phase(phase);
    }
  }

  Real log_mag_;
  Real phase_;
};

using LogComplexd = LogComplex<double>;

template <typename Real>
LogComplex<Real> logc_mul(const LogComplex<Real>& a, const LogComplex<Real>& b) {
  return a * b;
}

/// Sum by factoring out the largest magnitude. A sum that cancels to within
/// rounding of the summed magnitudes is returned as exact zero.
template <typename Real>
LogComplex<Real> logc_sum(std::span<const LogComplex<Real>> terms) {
  Real top = -std::numeric_limits<Real>::infinity();
  for (const auto& t : terms) top = std::max(top, t.log_mag());
  if (top == -std::numeric_limits<Real>::infinity()) return LogComplex<Real>::zero();

  std::complex<Real> acc(0);
  Real abs_acc = 0;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    const Real scale = std::exp(t.log_mag() - top);
    acc += std::polar(scale, t.phase());
    abs_acc += scale;
  }
  const Real noise = Real(4) * std::numeric_limits<Real>::epsilon() * abs_acc *
                     static_cast<Real>(terms.size());
  if (std::abs(acc) <= noise) return LogComplex<Real>::zero();
  return LogComplex<Real>(top + std::log(std::abs(acc)), std::arg(acc));
}

template <typename Real>
LogComplex<Real> logc_sum(std::initializer_list<LogComplex<Real>> terms) {
  return logc_sum(std::span<const LogComplex<Real>>(terms.begin(), terms.size()));
}

template <typename Real>
LogComplex<Real> operator+(const LogComplex<Real>& a, const LogComplex<Real>& b) {
  return logc_sum<Real>({a, b});
}

}  // namespace catchannel
