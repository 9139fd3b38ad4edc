#pragma once

// Generators and brute-force oracles shared by the test suites. Oracles are
// written as explicit index loops over the definitions, independent of the
// library's vectorized code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "gatefid/channel.hpp"
#include "gatefid/sampling.hpp"

namespace gatefid::test {

inline Rng make_rng(std::uint64_t seed) { return Rng(RngSpec{seed}); }

inline Matrix ginibre(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

inline Matrix random_hermitian(Index d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) / 2.0;
}

inline Matrix random_density(Index d, Rng& rng, Index rank = -1) {
  if (rank < 0) rank = d;
  const Matrix w = ginibre(d, rank, rng);
  const Matrix rho = w * w.adjoint();
  return rho / rho.trace().real();
}

inline Matrix basis_op(Index d, Index a, Index b) {
  Matrix m = Matrix::Zero(d, d);
  m(a, b) = 1.0;
  return m;
}

inline Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline Matrix hadamard() {
  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

/// Kraus set {diag(1, sqrt(1-g)), sqrt(g)|0><1|}.
inline QuantumChannel amplitude_damping(double gamma) {
  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel(2, 2, {k0, k1});
}

inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      for (Index k = 0; k < b.rows(); ++k)
        for (Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline Matrix partial_trace_oracle(const Matrix& m, Index d1, Index d2, Factor traced) {
  if (traced == Factor::first) {
    Matrix out = Matrix::Zero(d2, d2);
    for (Index i = 0; i < d2; ++i)
      for (Index j = 0; j < d2; ++j)
        for (Index k = 0; k < d1; ++k) out(i, j) += m(k * d2 + i, k * d2 + j);
    return out;
  }
  Matrix out = Matrix::Zero(d1, d1);
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j)
      for (Index k = 0; k < d2; ++k) out(i, j) += m(i * d2 + k, j * d2 + k);
  return out;
}

inline Matrix partial_transpose_oracle(const Matrix& m, Index d1, Index d2, Factor factor) {
  Matrix out(m.rows(), m.cols());
  for (Index a = 0; a < d1; ++a)
    for (Index b = 0; b < d2; ++b)
      for (Index c = 0; c < d1; ++c)
        for (Index e = 0; e < d2; ++e) {
          const Complex v = m(a * d2 + b, c * d2 + e);
          if (factor == Factor::second) {
            out(a * d2 + e, c * d2 + b) = v;
          } else {
            out(c * d2 + b, a * d2 + e) = v;
          }
        }
  return out;
}

/// J = sum_{a,b} L(|a><b|) (x) |a><b| evaluated term by term.
inline Matrix choi_oracle(const KrausMap& map) {
  const Index din = map.dim_in();
  const Index dout = map.dim_out();
  Matrix j = Matrix::Zero(din * dout, din * dout);
  for (Index a = 0; a < din; ++a)
    for (Index b = 0; b < din; ++b) {
      Matrix image = Matrix::Zero(dout, dout);
      for (const Matrix& k : map.kraus()) image += k * basis_op(din, a, b) * k.adjoint();
      j += kron_oracle(image, basis_op(din, a, b));
    }
  return j;
}

/// tr(U phi phi^dagger U^dagger E(phi phi^dagger)) through full density matrices.
inline double gate_fidelity_oracle(const KrausMap& e, const Matrix& u, const Vector& phi) {
  const Matrix rho = phi * phi.adjoint();
  Matrix out = Matrix::Zero(e.dim_out(), e.dim_out());
  for (const Matrix& k : e.kraus()) out += k * rho * k.adjoint();
  return (u * rho * u.adjoint() * out).trace().real();
}

/// Mixes a Kraus set by a random isometry: B_i = sum_j V_ij A_j.
inline std::vector<Matrix> isometric_mix(const std::vector<Matrix>& kraus, Index extra, Rng& rng) {
  const Index n = static_cast<Index>(kraus.size());
  const Matrix v = haar_random_unitary(n + extra, rng).leftCols(n);
  std::vector<Matrix> out;
  for (Index i = 0; i < n + extra; ++i) {
    Matrix b = Matrix::Zero(kraus[0].rows(), kraus[0].cols());
    for (Index j = 0; j < n; ++j) b += v(i, j) * kraus[static_cast<std::size_t>(j)];
    out.push_back(b);
  }
  return out;
}

/// Standard error of the sample variance, sqrt((m4 - s^4) / n).
inline double variance_stderr(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double c = (v - mean) * (v - mean);
    m2 += c;
    m4 += c * c;
  }
  m2 /= n;
  m4 /= n;
  return std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
}

}  // namespace gatefid::test
