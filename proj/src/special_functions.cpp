#include "catchannel/special_functions.hpp"

#include <cmath>
#include <string>

#include "catchannel/errors.hpp"

namespace catchannel {
namespace {

void check_degree(int n, int max_degree) {
  if (n < 0) throw InvalidArgument("polynomial degree must be non-negative, got " + std::to_string(n));
  if (n > max_degree) {
    throw DegreeExceeded("degree " + std::to_string(n) + " exceeds maximum " +
                         std::to_string(max_degree));
  }
}

/// Generalized binomial C(m, j) for integer m (any sign) and j >= 0.
double generalized_binomial(int m, int j) {
  double value = 1.0;
  for (int i = 0; i < j; ++i) value *= static_cast<double>(m - i) / static_cast<double>(i + 1);
  return value;
}

}  // namespace

std::complex<double> hermite(int n, std::complex<double> z, int max_degree) {
  check_degree(n, max_degree);
  std::complex<double> prev(1.0), cur = 2.0 * z;
  if (n == 0) return prev;
  for (int k = 1; k < n; ++k) {
    std::complex<double> next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

LogComplexd hermite_log(int n, std::complex<double> z, int max_degree) {
  check_degree(n, max_degree);
  if (n == 0) return LogComplexd::one();
  constexpr int kShift = 512;
  const double big = std::ldexp(1.0, kShift);
  const double small = std::ldexp(1.0, -kShift);

  std::complex<double> prev(1.0), cur = 2.0 * z;
  long exponent = 0;  // value = mantissa * 2^exponent
  for (int k = 1; k < n; ++k) {
    std::complex<double> next = 2.0 * z * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
    const double m = std::max(std::abs(cur), std::abs(prev));
    if (m > big) {
      cur *= small;
      prev *= small;
      exponent += kShift;
    } else if (m != 0.0 && m < small) {
      cur *= big;
      prev *= big;
      exponent -= kShift;
    }
  }
  LogComplexd mantissa = LogComplexd::from_complex(cur);
  if (mantissa.is_zero()) return mantissa;
  return LogComplexd(mantissa.log_mag() + static_cast<double>(exponent) * std::log(2.0),
                     mantissa.phase());
}

std::complex<double> assoc_laguerre(int n, int a, std::complex<double> x, int max_degree) {
  check_degree(n, max_degree);
  if (n == 0) return 1.0;
  if (a < 0) {
    std::complex<double> sum(0.0), power(1.0);
    double factorial = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) {
        power *= x;
        factorial *= k;
      }
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      sum += sign * generalized_binomial(n + a, n - k) * power / factorial;
    }
    return sum;
  }
  const double ad = a;
  std::complex<double> prev(1.0), cur = 1.0 + ad - x;
  for (int k = 1; k < n; ++k) {
    const double kd = k;
    std::complex<double> next = ((2.0 * kd + 1.0 + ad - x) * cur - (kd + ad) * prev) / (kd + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace catchannel
