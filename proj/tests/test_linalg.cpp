#include <doctest.h>

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>

#include "gatefid/linalg.hpp"
#include "support.hpp"

using namespace gatefid;
using namespace gatefid::test;

TEST_CASE("tensor: identities, basis projectors and the mixed product rule") {
  CHECK(tensor(Matrix::Identity(2, 2), Matrix::Identity(2, 2)).isApprox(Matrix::Identity(4, 4), 0.0));

  const Matrix p = tensor(basis_op(2, 0, 0), basis_op(2, 1, 1));
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK((p - expected).norm() == 0.0);

  Rng rng = make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = ginibre(2, 2, rng), b = ginibre(2, 3, rng), c = ginibre(2, 2, rng), d = ginibre(3, 2, rng);
    CHECK((tensor(a, b) - kron_oracle(a, b)).norm() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((tensor(a, b) * tensor(c, d) - tensor(a * c, b * d)).norm() < 1e-12);
    const Matrix e = ginibre(3, 1, rng);
    CHECK((tensor(tensor(a, b), e) - tensor(a, tensor(b, e))).norm() < 1e-12);
  }
}

TEST_CASE("partial trace matches the index-sum oracle and preserves the trace") {
  CHECK((partial_trace(Matrix::Identity(4, 4), 2, 2, Factor::first) - 2.0 * Matrix::Identity(2, 2)).norm() == 0.0);

  Rng rng = make_rng(12);
  for (Index d1 : {2, 3}) {
    for (Index d2 : {2, 4}) {
      const Matrix m = ginibre(d1 * d2, d1 * d2, rng);
      for (Factor f : {Factor::first, Factor::second}) {
        const Matrix r = partial_trace(m, d1, d2, f);
        CHECK((r - partial_trace_oracle(m, d1, d2, f)).norm() < 1e-12);
        CHECK(std::abs(r.trace() - m.trace()) < 1e-12);
      }
      const Matrix a = ginibre(d1, d1, rng), b = ginibre(d2, d2, rng);
      CHECK((partial_trace(tensor(a, b), d1, d2, Factor::first) - a.trace() * b).norm() < 1e-12);
      CHECK((partial_trace(tensor(a, b), d1, d2, Factor::second) - b.trace() * a).norm() < 1e-12);
    }
  }
  CHECK_THROWS_AS(partial_trace(Matrix::Identity(5, 5), 2, 2, Factor::first), DimensionError);
}

TEST_CASE("partial transpose: oracle, product rule, involution, Hermiticity") {
  Rng rng = make_rng(13);
  const Matrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
  CHECK((partial_transpose(tensor(a, b), 2, 3, Factor::second) - tensor(a, Matrix(b.transpose()))).norm() < 1e-14);
  CHECK((partial_transpose(tensor(a, b), 2, 3, Factor::first) - tensor(Matrix(a.transpose()), b)).norm() < 1e-14);

  const Matrix m = ginibre(6, 6, rng);
  for (Factor f : {Factor::first, Factor::second}) {
    CHECK((partial_transpose(m, 2, 3, f) - partial_transpose_oracle(m, 2, 3, f)).norm() == 0.0);
  }

  const Matrix h = random_hermitian(16, rng);
  const Matrix twice = partial_transpose(partial_transpose(h, 4, 4, Factor::second), 4, 4, Factor::second);
  CHECK((twice - h).norm() == 0.0);
  CHECK(hermiticity_residual(partial_transpose(h, 4, 4, Factor::second)) == 0.0);
}

TEST_CASE("vec: basis convention, inverse and Hilbert-Schmidt isometry") {
  const Vector v = vec(basis_op(2, 0, 1));
  Vector expected = Vector::Zero(4);
  expected(1) = 1.0;
  CHECK((v - expected).norm() == 0.0);

  Vector vi(4);
  vi << 1, 0, 0, 1;
  CHECK((vec(Matrix::Identity(2, 2)) - vi).norm() == 0.0);

  Rng rng = make_rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = ginibre(3, 3, rng), b = ginibre(3, 3, rng);
    const Complex direct = (a.adjoint() * b).trace();
    CHECK(std::abs(hs_inner(a, b) - direct) < 1e-12);
    CHECK(std::abs(vec(a).dot(vec(b)) - direct) < 1e-12);
    CHECK((unvec(vec(a), 3, 3) - a).norm() == 0.0);
  }
  const Matrix r = ginibre(2, 3, rng);
  CHECK((unvec(vec(r), 2, 3) - r).norm() == 0.0);
  CHECK_THROWS_AS(unvec(Vector::Zero(5), 2, 3), DimensionError);
}

TEST_CASE("Schatten norms") {
  for (Index d : {1, 2, 5}) {
    const Matrix id = Matrix::Identity(d, d);
    CHECK(schatten_norm(id, Schatten::one) == doctest::Approx(static_cast<double>(d)));
    CHECK(schatten_norm(id, Schatten::two) == doctest::Approx(std::sqrt(static_cast<double>(d))));
    CHECK(schatten_norm(id, Schatten::inf) == doctest::Approx(1.0));
  }
  Rng rng = make_rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const PureState phi = haar_random_state(4, rng);
    CHECK(schatten_norm(phi.projector(), Schatten::two) == doctest::Approx(1.0).epsilon(1e-12));

    const Matrix a = ginibre(5, 2, rng) * ginibre(2, 5, rng);
    const double n1 = schatten_norm(a, Schatten::one);
    const double n2 = schatten_norm(a, Schatten::two);
    CHECK(n2 <= n1 + 1e-12);
    CHECK(n1 <= 2.0 * n2 + 1e-12);
    CHECK(schatten_norm(a, Schatten::inf) <= n2 + 1e-12);
  }
}

TEST_CASE("hermitian_eig: ordering, reconstruction, closed forms") {
  Matrix diag = Matrix::Zero(3, 3);
  diag.diagonal() << 3, 1, 2;
  const auto e = hermitian_eig(diag);
  CHECK(e.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(e.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(e.eigenvalues(2) == doctest::Approx(3.0));

  const auto x = hermitian_eig(pauli_x());
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(x.eigenvalues(1) == doctest::Approx(1.0));

  Rng rng = make_rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_hermitian(8, rng);
    const auto eig = hermitian_eig(m);
    CHECK((eig.reconstruct() - m).norm() <= 1e-10 * m.norm());
    CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors - Matrix::Identity(8, 8)).norm() < 1e-10);
    for (Index i = 1; i < 8; ++i) CHECK(eig.eigenvalues(i - 1) <= eig.eigenvalues(i));
  }

  // 2x2: (a + c)/2 -+ sqrt(((a - c)/2)^2 + |b|^2)
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_hermitian(2, rng);
    const double a = m(0, 0).real(), c = m(1, 1).real();
    const double r = std::sqrt((a - c) * (a - c) / 4.0 + std::norm(m(0, 1)));
    const auto eig = hermitian_eig(m);
    CHECK(eig.eigenvalues(0) == doctest::Approx((a + c) / 2.0 - r).epsilon(1e-10));
    CHECK(eig.eigenvalues(1) == doctest::Approx((a + c) / 2.0 + r).epsilon(1e-10));
  }

  // 3x3: trigonometric roots of the characteristic polynomial.
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_hermitian(3, rng);
    const double q = m.trace().real() / 3.0;
    const Matrix shifted = m - q * Matrix::Identity(3, 3);
    const double p = std::sqrt((shifted * shifted).trace().real() / 6.0);
    const Matrix b = shifted / p;
    const double half_det = std::clamp(b.determinant().real() / 2.0, -1.0, 1.0);
    const double phi = std::acos(half_det) / 3.0;
    const double top = q + 2.0 * p * std::cos(phi);
    const double bottom = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    const double mid = 3.0 * q - top - bottom;
    const auto eig = hermitian_eig(m);
    CHECK(std::abs(eig.eigenvalues(0) - bottom) < 1e-10);
    CHECK(std::abs(eig.eigenvalues(1) - mid) < 1e-10);
    CHECK(std::abs(eig.eigenvalues(2) - top) < 1e-10);
  }

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_eig(bad), NumericalError);
}

TEST_CASE("eigendecomposition works over real scalars too") {
  Eigen::MatrixXd m(2, 2);
  m << 2, 1, 1, 2;
  const auto eig = hermitian_eig(m);
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(3.0));
  const Eigen::MatrixXd mm = tensor(m, m);
  CHECK(mm(1, 2) == 1.0);
  CHECK(mm(3, 3) == 4.0);
  CHECK(partial_trace(mm, 2, 2, Factor::first).isApprox(4.0 * m));
}

TEST_CASE("symmetric and antisymmetric projectors") {
  for (Index d : {2, 3, 4, 5}) {
    const Matrix pa = antisym_projector(d);
    const Matrix ps = sym_projector(d);
    CHECK((pa * pa - pa).norm() < 1e-12);
    CHECK(pa.trace().real() == doctest::Approx(static_cast<double>(d * (d - 1)) / 2.0));
    CHECK((pa + ps - Matrix::Identity(d * d, d * d)).norm() < 1e-12);
    Rng rng = make_rng(17 + d);
    for (int trial = 0; trial < 10; ++trial) {
      const Vector psi = haar_random_state(d, rng).amplitudes();
      CHECK((pa * tensor(psi, psi)).norm() < 1e-12);
    }
  }
  // d = 2: the singlet.
  Vector singlet = Vector::Zero(4);
  singlet(1) = 1.0 / std::sqrt(2.0);
  singlet(2) = -1.0 / std::sqrt(2.0);
  CHECK((antisym_projector(2) - singlet * singlet.adjoint()).norm() < 1e-15);
  CHECK(antisym_projector(4).trace().real() == doctest::Approx(6.0));
  CHECK_THROWS_AS(antisym_projector(1), DomainError);
}

TEST_CASE("PureState and finiteness guards") {
  CHECK_NOTHROW(PureState::basis(3, 2));
  Vector v = Vector::Ones(2);
  CHECK_THROWS_AS(PureState{v}, NumericalError);
  CHECK(PureState::normalized(v).amplitudes().norm() == doctest::Approx(1.0));
  v(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS(PureState::normalized(v));
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(require_finite(m, "m"), NumericalError);
}
