#ifndef TBT_LINALG_HPP
#define TBT_LINALG_HPP

// Dense complex linear algebra kernel: checked products, Kronecker products,
// partial-pivoting LU and max-norm helpers. All free functions accept any
// Eigen expression and return a row-major dense matrix of the same scalar.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tbt/errors.hpp"

namespace tbt {

template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using cplx = std::complex<double>;
using Mat = DenseMatrix<cplx>;

inline constexpr cplx kI{0.0, 1.0};

namespace detail {

template <typename Derived>
std::string shape_of(const Eigen::MatrixBase<Derived>& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

}  // namespace detail

template <typename Scalar>
DenseMatrix<Scalar> identity(Eigen::Index n) {
  return DenseMatrix<Scalar>::Identity(n, n);
}

inline Mat eye(Eigen::Index n) { return identity<cplx>(n); }

/// Column vector of n ones.
inline Mat ones(Eigen::Index n) { return Mat::Ones(n, 1); }

inline Mat zeros(Eigen::Index rows, Eigen::Index cols) {
  return Mat::Zero(rows, cols);
}

/// Largest entry modulus; 0 for an empty or zero matrix.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real norm_max(
    const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return a.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const auto v = a(i, j);
      if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v)))
        return false;
    }
  return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const std::string& what) {
  if (!all_finite(a)) throw NonFiniteEntry(what + ": matrix has NaN/Inf entries");
}

template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> matmul(const Eigen::MatrixBase<DerivedA>& a,
                                              const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("matmul: cannot multiply " + detail::shape_of(a) +
                            " by " + detail::shape_of(b));
  return a * b;
}

/// Kronecker product; block (i,k) of the result is a(i,k) * b.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  const Eigen::Index br = b.rows(), bc = b.cols();
  DenseMatrix<typename DerivedA::Scalar> out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      out.block(i * br, k * bc, br, bc) = a(i, k) * b;
  return out;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> conj_transpose(const Eigen::MatrixBase<Derived>& a) {
  return a.adjoint();
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> transpose(const Eigen::MatrixBase<Derived>& a) {
  return a.transpose();
}

template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> add(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("add: " + detail::shape_of(a) + " vs " + detail::shape_of(b));
  return a + b;
}

template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> sub(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("sub: " + detail::shape_of(a) + " vs " + detail::shape_of(b));
  return a - b;
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> scale(const Eigen::MatrixBase<Derived>& a,
                                            typename Derived::Scalar c) {
  return c * a;
}

/// ||x - ref||_max / ||ref||_max, falling back to the absolute difference
/// when the reference vanishes.
template <typename DerivedA, typename DerivedB>
double rel_residual(const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& ref) {
  if (x.rows() != ref.rows() || x.cols() != ref.cols())
    throw DimensionMismatch("rel_residual: " + detail::shape_of(x) + " vs " +
                            detail::shape_of(ref));
  const double diff = norm_max(x - ref);
  const double scale = norm_max(ref);
  return scale > 0 ? diff / scale : diff;
}

enum class Side { left, right };

/// Applies (I_outer (x) S (x) I_inner) to x: from the left it maps
/// x -> (I (x) S (x) I) x, from the right x -> x (I (x) S (x) I).
/// Costs O(size(x) * S.rows()) and never forms the Kronecker product.
template <typename DerivedS, typename DerivedX>
DenseMatrix<typename DerivedX::Scalar> kron_apply(const Eigen::MatrixBase<DerivedS>& s,
                                                  Eigen::Index outer, Eigen::Index inner,
                                                  const Eigen::MatrixBase<DerivedX>& x,
                                                  Side side) {
  const Eigen::Index n = s.rows();
  if (s.cols() != n) throw DimensionMismatch("kron_apply: factor must be square");
  const Eigen::Index full = outer * n * inner;
  const Eigen::Index along = side == Side::left ? x.rows() : x.cols();
  if (along != full)
    throw DimensionMismatch("kron_apply: operator is " + std::to_string(full) + "-square, x is " +
                            detail::shape_of(x));
  DenseMatrix<typename DerivedX::Scalar> y =
      DenseMatrix<typename DerivedX::Scalar>::Zero(x.rows(), x.cols());
  for (Eigen::Index a = 0; a < outer; ++a) {
    const Eigen::Index base = a * n * inner;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (side == Side::left) {
          const auto c = s(i, j);
          if (c != decltype(c)(0))
            y.middleRows(base + i * inner, inner) += c * x.middleRows(base + j * inner, inner);
        } else {
          const auto c = s(j, i);
          if (c != decltype(c)(0))
            y.middleCols(base + i * inner, inner) += c * x.middleCols(base + j * inner, inner);
        }
      }
  }
  return y;
}

/// LU factorization with partial (row) pivoting, P*A = L*U.
///
/// A pivot whose modulus is at most n * eps * maxabs(A) is treated as zero
/// and raises SingularMatrix carrying the pivot's column index.
template <typename Scalar>
class LuFactor {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  template <typename Derived>
  explicit LuFactor(const Eigen::MatrixBase<Derived>& a) : lu_(a) {
    if (lu_.rows() != lu_.cols())
      throw DimensionMismatch("lu: matrix must be square, got " + detail::shape_of(a));
    require_finite(lu_, "lu");
    const Eigen::Index n = lu_.rows();
    perm_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
    const Real threshold =
        static_cast<Real>(n) * std::numeric_limits<Real>::epsilon() * norm_max(lu_);

    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index piv = k;
      Real best = std::abs(lu_(k, k));
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const Real v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          piv = i;
        }
      }
      if (best <= threshold) throw SingularMatrix(static_cast<std::size_t>(k), best);
      if (piv != k) {
        lu_.row(k).swap(lu_.row(piv));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
      }
      const Scalar pivot = lu_(k, k);
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const Scalar f = lu_(i, k) / pivot;
        lu_(i, k) = f;
        if (f != Scalar(0))
          lu_.row(i).tail(n - k - 1) -= f * lu_.row(k).tail(n - k - 1);
      }
    }
  }

  Eigen::Index size() const { return lu_.rows(); }

  /// Solves A X = rhs.
  template <typename Derived>
  DenseMatrix<Scalar> solve(const Eigen::MatrixBase<Derived>& rhs) const {
    const Eigen::Index n = lu_.rows();
    if (rhs.rows() != n)
      throw DimensionMismatch("lu_solve: matrix is " + std::to_string(n) + "x" +
                              std::to_string(n) + ", rhs is " + detail::shape_of(rhs));
    DenseMatrix<Scalar> x(n, rhs.cols());
    for (Eigen::Index i = 0; i < n; ++i) x.row(i) = rhs.row(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 1; i < n; ++i)
      for (Eigen::Index k = 0; k < i; ++k)
        if (lu_(i, k) != Scalar(0)) x.row(i) -= lu_(i, k) * x.row(k);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      for (Eigen::Index k = i + 1; k < n; ++k)
        if (lu_(i, k) != Scalar(0)) x.row(i) -= lu_(i, k) * x.row(k);
      x.row(i) /= lu_(i, i);
    }
    return x;
  }

  DenseMatrix<Scalar> inverse() const { return solve(identity<Scalar>(lu_.rows())); }

  const DenseMatrix<Scalar>& packed() const { return lu_; }
  const std::vector<Eigen::Index>& permutation() const { return perm_; }

 private:
  DenseMatrix<Scalar> lu_;
  std::vector<Eigen::Index> perm_;
};

template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> lu_solve(const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedB>& rhs) {
  if (a.rows() != rhs.rows())
    throw DimensionMismatch("lu_solve: matrix is " + detail::shape_of(a) +
                            ", rhs is " + detail::shape_of(rhs));
  return LuFactor<typename DerivedA::Scalar>(a).solve(rhs);
}

template <typename Derived>
DenseMatrix<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived>& a) {
  return LuFactor<typename Derived::Scalar>(a).inverse();
}

/// Solves X * a = rhs, i.e. X = rhs * a^{-1}, through the adjoint system.
template <typename DerivedA, typename DerivedB>
DenseMatrix<typename DerivedA::Scalar> lu_solve_right(const Eigen::MatrixBase<DerivedA>& a,
                                                      const Eigen::MatrixBase<DerivedB>& rhs) {
  if (a.cols() != rhs.cols())
    throw DimensionMismatch("lu_solve_right: matrix is " + detail::shape_of(a) +
                            ", rhs is " + detail::shape_of(rhs));
  return lu_solve(a.adjoint(), rhs.adjoint()).adjoint();
}

}  // namespace tbt

#endif  // TBT_LINALG_HPP
