#include "gatefid/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gatefid {

KrausMap::KrausMap(Index dim_in, Index dim_out, std::vector<Matrix> kraus)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
  if (dim_in_ < 1 || dim_out_ < 1) throw DimensionError("KrausMap: dimensions must be positive");
  if (kraus_.empty()) throw DimensionError("KrausMap: empty Kraus list");
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    const Matrix& k = kraus_[i];
    if (k.rows() != dim_out_ || k.cols() != dim_in_) {
      throw DimensionError("KrausMap: Kraus operator " + std::to_string(i) + " is " +
                           std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                           ", expected " + std::to_string(dim_out_) + "x" +
                           std::to_string(dim_in_));
    }
    require_finite(k, "KrausMap");
  }
}

double KrausMap::trace_preservation_residual() const {
  Matrix sum = Matrix::Zero(dim_in_, dim_in_);
  for (const Matrix& k : kraus_) sum.noalias() += k.adjoint() * k;
  return (sum - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
}

QuantumChannel::QuantumChannel(KrausMap map, double tol) : KrausMap(std::move(map)) {
  const double residual = trace_preservation_residual();
  if (!(residual <= tol)) {
    throw NumericalError("QuantumChannel: Kraus operators are not trace preserving (residual " +
                         std::to_string(residual) + ")");
  }
}

QuantumChannel::QuantumChannel(Index dim_in, Index dim_out, std::vector<Matrix> kraus, double tol)
    : QuantumChannel(KrausMap(dim_in, dim_out, std::move(kraus)), tol) {}

QuantumChannel QuantumChannel::identity(Index d) {
  return QuantumChannel(d, d, {Matrix::Identity(d, d)});
}

ChoiMatrix choi_from_kraus(const KrausMap& map) {
  const Index n = map.dim_in() * map.dim_out();
  ChoiMatrix out{map.dim_in(), map.dim_out(), Matrix::Zero(n, n)};
  for (const Matrix& k : map.kraus()) {
    const Vector v = vec(k);
    out.matrix.noalias() += v * v.adjoint();
  }
  return out;
}

namespace {

void require_choi_shape(const ChoiMatrix& choi, const char* what) {
  if (choi.dim_in < 1 || choi.dim_out < 1) throw DimensionError(std::string(what) + ": bad dims");
  require_square(choi.matrix, choi.dim_in * choi.dim_out, what);
}

}  // namespace

KrausMap kraus_map_from_choi(const ChoiMatrix& choi, double rank_tol) {
  require_choi_shape(choi, "kraus_from_choi");
  const auto eig = hermitian_eig(choi.matrix);
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  if (eig.eigenvalues(0) < -kChannelTolerance * scale) {
    throw NumericalError("kraus_from_choi: Choi matrix is not positive semidefinite (min eigenvalue " +
                         std::to_string(eig.eigenvalues(0)) + ")");
  }
  std::vector<Matrix> kraus;
  for (Index i = eig.eigenvalues.size() - 1; i >= 0; --i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda < rank_tol) break;
    Vector v = eig.eigenvectors.col(i);
    for (Index c = 0; c < v.size(); ++c) {
      const double mag = std::abs(v(c));
      if (mag > 1e-12) {
        v *= std::conj(v(c)) / mag;
        v(c) = mag;
        break;
      }
    }
    kraus.push_back(unvec(std::sqrt(lambda) * v, choi.dim_out, choi.dim_in));
  }
  if (kraus.empty()) kraus.push_back(Matrix::Zero(choi.dim_out, choi.dim_in));
  return KrausMap(choi.dim_in, choi.dim_out, std::move(kraus));
}

QuantumChannel kraus_from_choi(const ChoiMatrix& choi, double rank_tol) {
  // Dropped eigenvalues perturb sum K^dagger K by at most their sum.
  const double slack = static_cast<double>(choi.dim_in * choi.dim_out) * rank_tol;
  return QuantumChannel(kraus_map_from_choi(choi, rank_tol), kChannelTolerance + slack);
}

CptpReport validate_cptp(const ChoiMatrix& choi, double tol) {
  require_choi_shape(choi, "validate_cptp");
  CptpReport report;
  report.tolerance = tol;
  report.hermitian_residual = hermiticity_residual(choi.matrix);
  const Matrix sym = (choi.matrix + choi.matrix.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = solver.info() == Eigen::Success
                              ? solver.eigenvalues()(0)
                              : -std::numeric_limits<double>::infinity();
  const Matrix marginal = partial_trace(choi.matrix, choi.dim_out, choi.dim_in, Factor::first);
  report.tp_residual =
      schatten_norm(marginal - Matrix::Identity(choi.dim_in, choi.dim_in), Schatten::inf);
  const double scale = std::max(1.0, choi.matrix.cwiseAbs().maxCoeff());
  report.is_cp = report.min_eigenvalue >= -tol && report.hermitian_residual <= tol * scale;
  report.is_tp = report.tp_residual <= tol;
  return report;
}

namespace {

Matrix pauli(int which) {
  Matrix p(2, 2);
  switch (which) {
    case 0: p << 1, 0, 0, 1; break;
    case 1: p << 0, 1, 1, 0; break;
    case 2: p << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: p << 1, 0, 0, -1; break;
  }
  return p;
}

int qubit_count(Index d) {
  int n = 0;
  Index x = 1;
  while (x < d) {
    x *= 2;
    ++n;
  }
  return x == d ? n : -1;
}

}  // namespace

std::vector<Matrix> unitary_one_design(Index d) {
  if (d < 1) throw DomainError("unitary_one_design: d must be positive");
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(d * d));
  const int n = qubit_count(d);
  if (n >= 0) {
    // Pauli strings, leftmost qubit is the most significant base-4 digit.
    for (Index code = 0; code < d * d; ++code) {
      Matrix m = Matrix::Identity(1, 1);
      for (int q = n - 1; q >= 0; --q) {
        const int digit = static_cast<int>((code >> (2 * q)) & 3);
        m = tensor(m, pauli(digit));
      }
      out.push_back(std::move(m));
    }
    return out;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      // X^a Z^b |j> = w^{b j} |j + a>
      Matrix m = Matrix::Zero(d, d);
      for (Index j = 0; j < d; ++j) {
        m((j + a) % d, j) = std::polar(1.0, two_pi * static_cast<double>((b * j) % d) /
                                                static_cast<double>(d));
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

QuantumChannel depolarizing(double p, Index d) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p must lie in [0, 1]");
  if (d < 2) throw DomainError("depolarizing: d must be >= 2");
  const double dd = static_cast<double>(d);
  const auto design = unitary_one_design(d);
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(p + (1.0 - p) / (dd * dd)) * design[0]);
  const double weight = std::sqrt(1.0 - p) / dd;
  if (weight > 0.0) {
    for (std::size_t i = 1; i < design.size(); ++i) kraus.push_back(weight * design[i]);
  }
  return QuantumChannel(d, d, std::move(kraus));
}

ChoiMatrix depolarizing_choi(double p, Index d) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p must lie in [0, 1]");
  if (d < 2) throw DomainError("depolarizing: d must be >= 2");
  const Vector bell = vec(Matrix::Identity(d, d));
  ChoiMatrix out{d, d, p * (bell * bell.adjoint())};
  out.matrix.diagonal().array() += (1.0 - p) / static_cast<double>(d);
  return out;
}

QuantumChannel unitary_channel(const Matrix& u) {
  require_unitary(u, "unitary_channel");
  return QuantumChannel(u.cols(), u.rows(), {u});
}

KrausMap adjoint(const KrausMap& map) {
  std::vector<Matrix> kraus;
  kraus.reserve(map.size());
  for (const Matrix& k : map.kraus()) kraus.push_back(k.adjoint());
  return KrausMap(map.dim_out(), map.dim_in(), std::move(kraus));
}

QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first) {
  if (second.dim_in() != first.dim_out()) throw DimensionError("compose: dimensions do not chain");
  std::vector<Matrix> kraus;
  kraus.reserve(second.size() * first.size());
  for (const Matrix& b : second.kraus()) {
    for (const Matrix& a : first.kraus()) kraus.push_back(b * a);
  }
  const KrausMap product(first.dim_in(), second.dim_out(), std::move(kraus));
  return kraus_from_choi(choi_from_kraus(product));
}

Matrix apply(const KrausMap& map, const Matrix& rho) {
  require_square(rho, map.dim_in(), "apply");
  Matrix out = Matrix::Zero(map.dim_out(), map.dim_out());
  for (const Matrix& k : map.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

Matrix apply(const ChoiMatrix& choi, const Matrix& rho) {
  require_choi_shape(choi, "apply");
  require_square(rho, choi.dim_in, "apply");
  const Index din = choi.dim_in;
  Matrix out(choi.dim_out, choi.dim_out);
  for (Index i = 0; i < choi.dim_out; ++i) {
    for (Index j = 0; j < choi.dim_out; ++j) {
      out(i, j) = choi.matrix.block(i * din, j * din, din, din).cwiseProduct(rho).sum();
    }
  }
  return out;
}

QuantumChannel reduce_to_lambda(const QuantumChannel& e, const Matrix& u) {
  require_unitary(u, "reduce_to_lambda");
  if (u.rows() != e.dim_out() || u.cols() != e.dim_in()) {
    throw DimensionError("reduce_to_lambda: unitary does not match channel dimensions");
  }
  std::vector<Matrix> kraus;
  kraus.reserve(e.size());
  for (const Matrix& k : e.kraus()) kraus.push_back(u.adjoint() * k);
  return QuantumChannel(e.dim_in(), e.dim_in(), std::move(kraus));
}

QuantumChannel canonicalize(const QuantumChannel& ch) { return kraus_from_choi(choi_from_kraus(ch)); }

QuantumChannel tensor_identity(const QuantumChannel& ch, Index k) {
  if (k < 1) throw DimensionError("tensor_identity: k must be positive");
  std::vector<Matrix> kraus;
  kraus.reserve(ch.size());
  const Matrix id = Matrix::Identity(k, k);
  for (const Matrix& m : ch.kraus()) kraus.push_back(tensor(m, id));
  return QuantumChannel(ch.dim_in() * k, ch.dim_out() * k, std::move(kraus));
}

double choi_distance(const KrausMap& a, const KrausMap& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out()) {
    throw DimensionError("choi_distance: dimension mismatch");
  }
  return (choi_from_kraus(a).matrix - choi_from_kraus(b).matrix).norm();
}

}  // namespace gatefid
