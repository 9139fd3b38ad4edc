#include "gatefid/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gatefid/detail/fidelity_kernel.hpp"

namespace gatefid {

namespace {

constexpr double kStateTolerance = 1e-8;
constexpr double kRangeTolerance = 1e-8;
constexpr double kTrivialVarianceBound = 0.25;

double clamp_fidelity(double f, const char* what) {
  if (!(f >= -kRangeTolerance && f <= 1.0 + kRangeTolerance)) {
    throw NumericalError(std::string(what) + ": value " + std::to_string(f) + " outside [0, 1]");
  }
  return std::clamp(f, 0.0, 1.0);
}

void require_state(const Matrix& rho, const char* what) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw DimensionError(std::string(what) + ": non-square");
  require_finite(rho, what);
  if (hermiticity_residual(rho) > kStateTolerance) {
    throw NumericalError(std::string(what) + ": not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > kStateTolerance) {
    throw NumericalError(std::string(what) + ": trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver((rho + rho.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -kStateTolerance) throw NumericalError(std::string(what) + ": not PSD");
}

/// Eigenvalues within round-off of zero relative to the largest one count as
/// zero; otherwise their square roots leak ~1e-8 into fidelities of pure states.
RealVector clipped_roots(const RealVector& eigenvalues) {
  const double cutoff = 64.0 * std::numeric_limits<double>::epsilon() *
                        std::max(1.0, static_cast<double>(eigenvalues.size())) *
                        std::max(0.0, eigenvalues.maxCoeff());
  return eigenvalues.unaryExpr([cutoff](double l) { return l > cutoff ? std::sqrt(l) : 0.0; });
}

Matrix psd_sqrt(const Matrix& m) {
  const auto eig = hermitian_eig(m);
  const RealVector roots = clipped_roots(eig.eigenvalues);
  return eig.eigenvectors * roots.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

void require_square_map(const KrausMap& e, Index d, const char* what) {
  if (e.dim_in() != e.dim_out()) throw DimensionError(std::string(what) + ": channel is not square");
  if (e.dim_in() != d) throw DimensionError(std::string(what) + ": dimension mismatch");
}

}  // namespace

double state_fidelity(const Matrix& rho, const Matrix& sigma) {
  require_state(rho, "state_fidelity(rho)");
  require_state(sigma, "state_fidelity(sigma)");
  if (rho.rows() != sigma.rows()) throw DimensionError("state_fidelity: dimension mismatch");
  const Matrix root = psd_sqrt((rho + rho.adjoint()) / 2.0);
  const Matrix inner = root * ((sigma + sigma.adjoint()) / 2.0) * root;
  const auto eig = hermitian_eig((inner + inner.adjoint()) / 2.0);
  const double t = clipped_roots(eig.eigenvalues).sum();
  return clamp_fidelity(t * t, "state_fidelity");
}

double gate_fidelity_pure(const KrausMap& e, const Matrix& u, const PureState& phi) {
  require_square_map(e, phi.dim(), "gate_fidelity_pure");
  require_unitary(u, "gate_fidelity_pure");
  if (u.rows() != phi.dim()) throw DimensionError("gate_fidelity_pure: unitary dimension mismatch");
  const Vector target = u * phi.amplitudes();
  return clamp_fidelity(detail::gate_fidelity_kernel(e, target, phi.amplitudes()),
                        "gate_fidelity_pure");
}

double gate_fidelity_pure(const KrausMap& e, const PureState& phi) {
  require_square_map(e, phi.dim(), "gate_fidelity_pure");
  return clamp_fidelity(detail::gate_fidelity_kernel(e, phi.amplitudes(), phi.amplitudes()),
                        "gate_fidelity_pure");
}

double average_gate_fidelity(const KrausMap& e, const Matrix& u) {
  require_unitary(u, "average_gate_fidelity");
  require_square_map(e, u.rows(), "average_gate_fidelity");
  const double d = static_cast<double>(e.dim_in());
  double overlap = 0.0;
  for (const Matrix& k : e.kraus()) overlap += std::norm(u.conjugate().cwiseProduct(k).sum());
  return clamp_fidelity((overlap + d) / (d * d + d), "average_gate_fidelity");
}

double average_gate_fidelity(const KrausMap& e) {
  if (e.dim_in() != e.dim_out()) throw DimensionError("average_gate_fidelity: channel is not square");
  const double d = static_cast<double>(e.dim_in());
  double overlap = 0.0;
  for (const Matrix& k : e.kraus()) overlap += std::norm(k.trace());
  return clamp_fidelity((overlap + d) / (d * d + d), "average_gate_fidelity");
}

double depolarizing_gate_fidelity(double p, std::int64_t d) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing_gate_fidelity: p must lie in [0, 1]");
  if (d < 2) throw DomainError("depolarizing_gate_fidelity: d must be >= 2");
  return p + (1.0 - p) / static_cast<double>(d);
}

double choi_bilinear_fidelity(const Matrix& choi, const PureState& psi) {
  const Index d = psi.dim();
  require_square(choi, d * d, "choi_bilinear_fidelity");
  const Matrix twisted = partial_transpose(choi, d, d, Factor::second);
  const Vector pp = tensor(psi.amplitudes(), psi.amplitudes());
  return pp.dot(twisted * pp).real();
}

double concentration_constant() {
  return 1.0 / (81.0 * std::pow(std::numbers::pi, 3) * std::numbers::ln2);
}

double variance_bound_exact(double d) {
  if (!(d >= 2.0)) throw DomainError("variance_bound_exact: d must be >= 2");
  const double num = 8.0 * d * d * d + 16.0 * d * d + 4.0 * d;
  return num / ((d * d + 2.0 * d + 1.0) * (d * d + 5.0 * d + 1.0));
}

double variance_bound_concentration(double d) {
  if (!(d >= 2.0)) throw DomainError("variance_bound_concentration: d must be >= 2");
  const double cd = concentration_constant() * d;
  // The optimizing epsilon exists only for Cd > 1; below that, and wherever the
  // formula exceeds it, the variance of a [0,1]-valued variable is at most 1/4.
  if (cd <= 1.0) return kTrivialVarianceBound;
  return std::min(kTrivialVarianceBound, (4.0 + std::log(cd)) / cd);
}

double variance_bound_concentration_qubits(int qubits) {
  if (qubits < 1) throw DomainError("variance_bound_concentration_qubits: need at least one qubit");
  const double c = concentration_constant();
  const double cd = c * std::exp2(qubits);
  if (cd <= 1.0) return kTrivialVarianceBound;
  return std::min(kTrivialVarianceBound, (4.0 + std::log(c) + qubits / std::numbers::ln2) / cd);
}

FidelityBoundSet variance_bounds(double d) {
  return {d, variance_bound_exact(d), variance_bound_concentration(d), concentration_constant()};
}

double l2_distance_to_depolarizing(const FidelityStats& stats) {
  return std::sqrt(std::max(0.0, stats.variance));
}

}  // namespace gatefid
