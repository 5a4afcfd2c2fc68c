#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/SVD>
#include <algorithm>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <sstream>
#include <vector>

#include "catchannel/diagnostics.hpp"
#include "catchannel/errors.hpp"
#include "catchannel/log_complex.hpp"

namespace catchannel {

/// exp(x^T A x + b^T x + c) over real x in R^dim, with complex symmetric A,
/// complex b and a log-domain constant c. There is no 1/2 and no sign baked
/// into the quadratic form.
template <typename Real>
class GaussianKernel {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using Index = Eigen::Index;

  GaussianKernel() : GaussianKernel(0) {}

  /// The constant kernel 1 on `dim` variables.
  explicit GaussianKernel(Index dim)
      : a_(Matrix::Zero(dim, dim)), b_(Vector::Zero(dim)), c_(LogComplex<Real>::one()) {}

  /// A is symmetrized on construction.
  GaussianKernel(const Matrix& a, const Vector& b, const LogComplex<Real>& c)
      : a_((a + a.transpose()) / Real(2)), b_(b), c_(c) {
    if (a.rows() != a.cols() || a.rows() != b.size()) {
      throw InvalidArgument("GaussianKernel: A must be square and match b");
    }
  }

  Index dim() const { return b_.size(); }
  const Matrix& quadratic() const { return a_; }
  const Vector& linear() const { return b_; }
  const LogComplex<Real>& constant() const { return c_; }

 private:
  Matrix a_;
  Vector b_;
  LogComplex<Real> c_;
};

using GaussianKerneld = GaussianKernel<double>;

template <typename Real>
LogComplex<Real> evaluate(const GaussianKernel<Real>& k,
                          const Eigen::Ref<const typename GaussianKernel<Real>::RealVector>& x) {
  using Scalar = typename GaussianKernel<Real>::Scalar;
  if (x.size() != k.dim()) throw InvalidArgument("evaluate: point dimension does not match kernel");
  const auto xc = x.template cast<Scalar>().eval();
  // transpose products, not dot(): b must not be conjugated
  const Scalar linear = (k.linear().transpose() * xc)(0);
  const Scalar quad = (xc.transpose() * k.quadratic() * xc)(0);
  return k.constant().times_exp(quad + linear);
}

template <typename Real>
GaussianKernel<Real> operator*(const GaussianKernel<Real>& k1, const GaussianKernel<Real>& k2) {
  if (k1.dim() != k2.dim()) throw InvalidArgument("kernel product: dimension mismatch");
  return GaussianKernel<Real>(k1.quadratic() + k2.quadratic(), k1.linear() + k2.linear(),
                              k1.constant() * k2.constant());
}

template <typename Real>
GaussianKernel<Real> conjugate(const GaussianKernel<Real>& k) {
  return GaussianKernel<Real>(k.quadratic().conjugate(), k.linear().conjugate(),
                              k.constant().conj());
}

namespace detail {

/// M = P^T L D L^T P for complex symmetric M whose Hermitian part is
/// positive definite. Every pivot then has positive real part, so summing
/// principal logs of the pivots gives the branch of log det M that is
/// continuous from the real positive-definite case.
template <typename Real>
class SymmetricPivotedLdlt {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Index = Eigen::Index;

  explicit SymmetricPivotedLdlt(const Matrix& m) : lower_(m), pivots_(m.rows()), perm_(m.rows()) {
    const Index n = m.rows();
    std::iota(perm_.begin(), perm_.end(), Index{0});
    log_det_ = Scalar(0);
    for (Index k = 0; k < n; ++k) {
      Index best = k;
      for (Index i = k + 1; i < n; ++i) {
        if (lower_(i, i).real() > lower_(best, best).real()) best = i;
      }
      if (best != k) {
        lower_.row(k).swap(lower_.row(best));
        lower_.col(k).swap(lower_.col(best));
        std::swap(perm_[k], perm_[best]);
      }
      const Scalar d = lower_(k, k);
      pivots_(k) = d;
      log_det_ += std::log(d);
      const Index rest = n - k - 1;
      if (rest > 0) {
        const auto col = (lower_.col(k).tail(rest) / d).eval();
        lower_.bottomRightCorner(rest, rest).noalias() -=
            col * lower_.row(k).tail(rest);
        lower_.col(k).tail(rest) = col;
      }
    }
    for (Index k = 0; k < n; ++k) {
      lower_(k, k) = Scalar(1);
      lower_.row(k).tail(n - k - 1).setZero();
    }
  }

  Scalar log_det() const { return log_det_; }

  Matrix solve(const Matrix& rhs) const {
    Matrix x(rhs.rows(), rhs.cols());
    for (Index i = 0; i < rhs.rows(); ++i) x.row(i) = rhs.row(perm_[i]);
    lower_.template triangularView<Eigen::UnitLower>().solveInPlace(x);
    for (Index i = 0; i < x.rows(); ++i) x.row(i) /= pivots_(i);
    lower_.transpose().template triangularView<Eigen::UnitUpper>().solveInPlace(x);
    Matrix out(rhs.rows(), rhs.cols());
    for (Index i = 0; i < rhs.rows(); ++i) out.row(perm_[i]) = x.row(i);
    return out;
  }

 private:
  Matrix lower_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pivots_;
  std::vector<Index> perm_;
  Scalar log_det_;
};

inline constexpr double kConditionWarning = 1e12;

}  // namespace detail

/// Integrates the variables `vars` out of `k`. The result is a kernel over
/// the remaining variables, in their original relative order.
/// Throws NotIntegrable unless Re(-A) restricted to `vars` is positive definite.
template <typename Real>
GaussianKernel<Real> marginalize(const GaussianKernel<Real>& k, std::span<const Eigen::Index> vars) {
  using Kernel = GaussianKernel<Real>;
  using Scalar = typename Kernel::Scalar;
  using Matrix = typename Kernel::Matrix;
  using Vector = typename Kernel::Vector;
  using Index = Eigen::Index;

  const Index n = k.dim();
  std::vector<char> integrate(static_cast<std::size_t>(n), 0);
  for (Index v : vars) {
    if (v < 0 || v >= n) throw InvalidArgument("marginalize: variable index out of range");
    if (integrate[v]) throw InvalidArgument("marginalize: duplicate variable index");
    integrate[v] = 1;
  }
  std::vector<Index> out_idx, keep_idx;
  for (Index i = 0; i < n; ++i) (integrate[i] ? out_idx : keep_idx).push_back(i);
  const Index m = static_cast<Index>(out_idx.size());
  if (m == 0) return k;

  const Matrix& a = k.quadratic();
  const Matrix neg_block = -a(out_idx, out_idx);

  Eigen::LLT<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> llt(neg_block.real());
  if (llt.info() != Eigen::Success) {
    throw NotIntegrable("real part of the integrated block is not positive definite (" +
                        std::to_string(m) + " variables)");
  }

  Eigen::JacobiSVD<Matrix> svd(neg_block);
  const auto& sv = svd.singularValues();
  const Real cond = sv(0) / sv(m - 1);
  if (!(cond <= Real(detail::kConditionWarning))) {
    std::ostringstream msg;
    msg << "integrated block condition number " << static_cast<double>(cond) << " exceeds 1e12";
    diag::warn("gkernel", msg.str());
  }

  const detail::SymmetricPivotedLdlt<Real> ldlt(neg_block);
  const Index kept = static_cast<Index>(keep_idx.size());

  Matrix rhs(m, kept + 1);
  rhs.leftCols(kept) = a(out_idx, keep_idx);
  rhs.col(kept) = k.linear()(out_idx);
  const Matrix sol = ldlt.solve(rhs);  // M^{-1} [A_VK, b_V]

  const Vector b_out = k.linear()(out_idx);
  const Matrix a_kv = a(keep_idx, out_idx);
  const Matrix new_a = a(keep_idx, keep_idx) + a_kv * sol.leftCols(kept);
  const Vector new_b = k.linear()(keep_idx) + a_kv * sol.col(kept);

  const Real half_m = static_cast<Real>(m) / Real(2);
  const Scalar shift = (b_out.transpose() * sol.col(kept))(0) / Real(4) +
                       half_m * std::log(std::numbers::pi_v<Real>) - ldlt.log_det() / Real(2);
  return Kernel(new_a, new_b, k.constant().times_exp(shift));
}

template <typename Real>
GaussianKernel<Real> marginalize(const GaussianKernel<Real>& k, std::initializer_list<Eigen::Index> vars) {
  return marginalize(k, std::span<const Eigen::Index>(vars.begin(), vars.size()));
}

/// Integral over all of R^dim.
template <typename Real>
LogComplex<Real> integral(const GaussianKernel<Real>& k) {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(k.dim()));
  std::iota(all.begin(), all.end(), Eigen::Index{0});
  return marginalize(k, std::span<const Eigen::Index>(all)).constant();
}

}  // namespace catchannel
