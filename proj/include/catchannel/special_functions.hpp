#pragma once

#include <complex>

#include "catchannel/log_complex.hpp"

namespace catchannel {

inline constexpr int kDefaultMaxDegree = 400;

/// Physicists' Hermite polynomial H_n(z) by the three-term recurrence.
/// Overflows to inf for large n|z|; use hermite_log there.
std::complex<double> hermite(int n, std::complex<double> z, int max_degree = kDefaultMaxDegree);

/// H_n(z) in log-domain. The recurrence runs on a rescaled mantissa pair
/// with a separate binary exponent, so n in the hundreds with |z| ~ 10 is fine.
LogComplexd hermite_log(int n, std::complex<double> z, int max_degree = kDefaultMaxDegree);

/// Associated Laguerre polynomial L_n^a(x) for integer a. a >= 0 uses the
/// upward recurrence in n; negative a uses the finite sum
/// sum_k (-1)^k C(n+a, n-k) x^k / k! with generalized binomials.
std::complex<double> assoc_laguerre(int n, int a, std::complex<double> x,
                                    int max_degree = kDefaultMaxDegree);

}  // namespace catchannel
