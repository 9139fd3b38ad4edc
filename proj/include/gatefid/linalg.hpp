#pragma once

// Dense complex linear algebra shared by every other module.
//
// Basis convention (fixed globally): |a> (x) |b> on C^{d1} (x) C^{d2} has
// index a*d2 + b. vec() is the row-major stacking, so
// vec(|a><b|) = |a> (x) |b>.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "gatefid/errors.hpp"

namespace gatefid {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Which tensor factor an operation acts on.
enum class Factor { first, second };

enum class Schatten { one, two, inf };

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite entry");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, Index n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) + "x" +
                         std::to_string(n) + ", got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

/// Kronecker product a (x) b.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  const Index br = b.rows();
  const Index bc = b.cols();
  DenseMatrix<Scalar> out(a.rows() * br, a.cols() * bc);
  const DenseMatrix<Scalar> bb = b.template cast<Scalar>();
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = Scalar(a(i, j)) * bb;
    }
  }
  return out;
}

/// Trace out `traced` from an operator on C^{d1} (x) C^{d2}.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, Index d1, Index d2, Factor traced) {
  using Scalar = typename Derived::Scalar;
  require_square(m, d1 * d2, "partial_trace");
  if (traced == Factor::first) {
    DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(d2, d2);
    for (Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
    return out;
  }
  DenseMatrix<Scalar> out(d1, d1);
  for (Index i = 0; i < d1; ++i) {
    for (Index j = 0; j < d1; ++j) out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
  }
  return out;
}

/// Transpose the chosen tensor factor of an operator on C^{d1} (x) C^{d2}.
template <typename Derived>
auto partial_transpose(const Eigen::MatrixBase<Derived>& m, Index d1, Index d2,
                       Factor transposed) {
  using Scalar = typename Derived::Scalar;
  require_square(m, d1 * d2, "partial_transpose");
  DenseMatrix<Scalar> out(d1 * d2, d1 * d2);
  for (Index i = 0; i < d1; ++i) {
    for (Index j = 0; j < d1; ++j) {
      if (transposed == Factor::second) {
        out.block(i * d2, j * d2, d2, d2) = m.block(i * d2, j * d2, d2, d2).transpose();
      } else {
        out.block(i * d2, j * d2, d2, d2) = m.block(j * d2, i * d2, d2, d2);
      }
    }
  }
  return out;
}

/// Row-major vectorization: vec(A)[i*cols + j] = A(i, j).
template <typename Derived>
auto vec(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  DenseVector<Scalar> out(a.size());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out(i * a.cols() + j) = a(i, j);
  }
  return out;
}

template <typename Derived>
auto unvec(const Eigen::MatrixBase<Derived>& v, Index rows, Index cols) {
  using Scalar = typename Derived::Scalar;
  if (rows <= 0 || cols <= 0 || v.size() != rows * cols) {
    throw DimensionError("unvec: length " + std::to_string(v.size()) + " is not " +
                         std::to_string(rows) + "*" + std::to_string(cols));
  }
  DenseMatrix<Scalar> out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = v(i * cols + j);
  }
  return out;
}

/// <A, B> = tr(A^dagger B).
template <typename DerivedA, typename DerivedB>
auto hs_inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("hs_inner: shape mismatch");
  return (a.adjoint() * b).trace();
}

template <typename Derived>
auto schatten_norm(const Eigen::MatrixBase<Derived>& m, Schatten p) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (m.size() == 0) return Real(0);
  if (p == Schatten::two) return Real(m.norm());
  const DenseMatrix<typename Derived::Scalar> plain = m;
  Eigen::JacobiSVD<DenseMatrix<typename Derived::Scalar>> svd(plain);
  const auto& sv = svd.singularValues();
  return p == Schatten::one ? Real(sv.sum()) : Real(sv(0));
}

/// Entrywise max of |M - M^dagger|.
template <typename Derived>
auto hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (m.rows() != m.cols()) throw DimensionError("hermiticity_residual: non-square");
  if (m.size() == 0) return Real(0);
  return Real((m - m.adjoint()).cwiseAbs().maxCoeff());
}

template <typename Scalar>
struct EigDecomposition {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  DenseVector<Real> eigenvalues;    // ascending
  DenseMatrix<Scalar> eigenvectors;  // orthonormal columns

  DenseMatrix<Scalar> reconstruct() const {
    return eigenvectors * eigenvalues.template cast<Scalar>().asDiagonal() *
           eigenvectors.adjoint();
  }
};

/// Relative Hermiticity tolerance accepted by hermitian_eig.
inline constexpr double kHermitianTolerance = 1e-10;

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized as
/// (M + M^dagger)/2 after the Hermiticity check.
template <typename Derived>
EigDecomposition<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eig: non-square input");
  require_finite(m, "hermitian_eig");
  const auto scale = std::max<double>(1.0, m.size() ? double(m.cwiseAbs().maxCoeff()) : 0.0);
  if (double(hermiticity_residual(m)) > kHermitianTolerance * scale) {
    throw NumericalError("hermitian_eig: matrix is not Hermitian within tolerance");
  }
  const DenseMatrix<Scalar> sym = (m + m.adjoint()) / typename Eigen::NumTraits<Scalar>::Real(2);
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: no convergence");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// SWAP on C^d (x) C^d.
template <typename Scalar = Complex>
DenseMatrix<Scalar> swap_operator(Index d) {
  DenseMatrix<Scalar> s = DenseMatrix<Scalar>::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) s(a * d + b, b * d + a) = Scalar(1);
  }
  return s;
}

/// Projector onto the antisymmetric subspace, (I - SWAP)/2.
template <typename Scalar = Complex>
DenseMatrix<Scalar> antisym_projector(Index d) {
  if (d < 2) throw DomainError("antisym_projector: d must be >= 2");
  return (DenseMatrix<Scalar>::Identity(d * d, d * d) - swap_operator<Scalar>(d)) / Scalar(2);
}

/// Projector onto the symmetric subspace, (I + SWAP)/2.
template <typename Scalar = Complex>
DenseMatrix<Scalar> sym_projector(Index d) {
  if (d < 1) throw DomainError("sym_projector: d must be >= 1");
  return (DenseMatrix<Scalar>::Identity(d * d, d * d) + swap_operator<Scalar>(d)) / Scalar(2);
}

/// Unit vector in C^d. Phase equivalence is left to the operations.
class PureState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw DimensionError("PureState: empty amplitude vector");
    require_finite(amplitudes_, "PureState");
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
      throw NumericalError("PureState: amplitudes are not normalized");
    }
  }

  static PureState normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("PureState: cannot normalize");
    return PureState(v / n);
  }

  static PureState basis(Index d, Index k) {
    if (k < 0 || k >= d) throw DimensionError("PureState::basis: index out of range");
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return PureState(std::move(v));
  }

  Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
};

/// Unitarity residual: entrywise max of |U^dagger U - I|.
inline double unitarity_residual(const Matrix& u) {
  if (u.rows() != u.cols()) throw DimensionError("unitarity_residual: non-square");
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline void require_unitary(const Matrix& u, const char* what, double tol = 1e-10) {
  if (u.rows() != u.cols()) throw DimensionError(std::string(what) + ": unitary must be square");
  require_finite(u, what);
  if (unitarity_residual(u) > tol) throw NumericalError(std::string(what) + ": matrix is not unitary");
}

}  // namespace gatefid
