#include "gatefid/nonuniqueness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "gatefid/detail/fidelity_kernel.hpp"
#include "gatefid/sampling.hpp"

namespace gatefid {

namespace {

Vector antisym_pair(Index d, Index a, Index b) {
  Vector v = Vector::Zero(d * d);
  v(a * d + b) = 1.0 / std::numbers::sqrt2;
  v(b * d + a) = -1.0 / std::numbers::sqrt2;
  return v;
}

}  // namespace

GOperator build_g_operator(Index d) {
  if (d < 4) throw DomainError("build_g_operator: requires d >= 4");
  using Pair = std::pair<Index, Index>;
  const std::array<std::pair<Pair, Pair>, 3> blocks{{
      {{0, 1}, {2, 3}},
      {{0, 2}, {1, 3}},
      {{0, 3}, {1, 2}},
  }};
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const auto& [alpha, beta] : blocks) {
    const Vector a = antisym_pair(d, alpha.first, alpha.second);
    const Vector b = antisym_pair(d, beta.first, beta.second);
    s.noalias() += a * b.adjoint() + b * a.adjoint();
  }
  GOperator g;
  g.d = d;
  g.choi = partial_transpose(s, d, d, Factor::second);
  g.antisym_image = std::move(s);
  return g;
}

double max_epsilon(const ChoiMatrix& jq, const GOperator& g) {
  if (jq.dim_in != g.d || jq.dim_out != g.d) throw DimensionError("max_epsilon: dimension mismatch");
  const auto eig = hermitian_eig(jq.matrix);
  const double lambda_min = eig.eigenvalues(0);
  if (!(lambda_min > kChannelTolerance)) {
    throw DomainError("max_epsilon: J(Q) is not positive definite (lambda_min = " +
                      std::to_string(lambda_min) + "); Q must be full rank");
  }
  return lambda_min / schatten_norm(g.choi, Schatten::inf);
}

DepolarizingFit depolarizing_fit(const QuantumChannel& r) {
  if (r.dim_in() != r.dim_out()) throw DimensionError("depolarizing_distance: channel is not square");
  const Index d = r.dim_in();
  if (d < 2) throw DimensionError("depolarizing_distance: d must be >= 2");
  const Matrix jr = choi_from_kraus(r).matrix;
  auto distance = [&](double p) { return (jr - depolarizing_choi(p, d).matrix).norm(); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = distance(x1);
  double f2 = distance(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = distance(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = distance(x2);
    }
  }
  DepolarizingFit fit{f1 <= f2 ? f1 : f2, f1 <= f2 ? x1 : x2};
  for (double edge : {0.0, 1.0}) {
    const double f = distance(edge);
    if (f < fit.distance) fit = {f, edge};
  }
  return fit;
}

double depolarizing_distance(const QuantumChannel& r) { return depolarizing_fit(r).distance; }

PairVerification verify_pair(const QuantumChannel& q, const QuantumChannel& r,
                             const VerifyOptions& options) {
  if (q.dim_in() != r.dim_in() || q.dim_out() != r.dim_out() || q.dim_in() != q.dim_out()) {
    throw DimensionError("verify_pair: channels must be square with equal dimensions");
  }
  const Index d = q.dim_in();
  PairVerification v;
  v.samples = options.samples;
  auto fidelity_of = [](const KrausMap& m) {
    return [&m](const Vector& phi) { return detail::gate_fidelity_kernel(m, phi, phi); };
  };
  const auto fq = sample_haar(d, options.samples, options.rng, fidelity_of(q), options.threads);
  const auto fr = sample_haar(d, options.samples, options.rng, fidelity_of(r), options.threads);
  for (std::size_t i = 0; i < fq.size(); ++i) {
    v.fidelity_residual_max = std::max(v.fidelity_residual_max, std::abs(fq[i] - fr[i]));
  }
  v.fidelity_std_r = std::sqrt(summarize(fr, options.rng).variance);

  const ChoiMatrix jq = choi_from_kraus(q);
  const ChoiMatrix jr = choi_from_kraus(r);
  v.q_report = validate_cptp(jq, options.cptp_tolerance);
  v.r_report = validate_cptp(jr, options.cptp_tolerance);
  v.choi_distance = (jr.matrix - jq.matrix).norm();
  v.adjoint_choi_distance = (jr.matrix - choi_from_kraus(adjoint(q)).matrix).norm();
  v.depolarizing_distance_r = depolarizing_distance(r);
  return v;
}

NonUniqPair perturb_channel(const QuantumChannel& q, double eps, const GOperator& g,
                            const VerifyOptions& options) {
  if (q.dim_in() != g.d || q.dim_out() != g.d) throw DimensionError("perturb_channel: dimension mismatch");
  const ChoiMatrix jq = choi_from_kraus(q);
  const double limit = max_epsilon(jq, g);
  if (!(eps > 0.0) || eps > limit * (1.0 + 1e-12)) {
    throw DomainError("perturb_channel: eps must lie in (0, " + std::to_string(limit) + "]");
  }
  const ChoiMatrix jr{g.d, g.d, jq.matrix + eps * g.choi};
  QuantumChannel r = kraus_from_choi(jr);
  PairVerification verification = verify_pair(q, r, options);
  if (!verification.q_report.ok() || !verification.r_report.ok()) {
    throw NumericalError("perturb_channel: perturbed pair failed the CPTP check");
  }
  if (!(verification.choi_distance > 1e-6)) {
    throw DomainError("perturb_channel: eps too small, the pair is not distinguishable (Choi distance " +
                      std::to_string(verification.choi_distance) + ")");
  }
  return NonUniqPair{q, std::move(r), eps, limit, verification};
}

NonUniqPair perturb_channel(const QuantumChannel& q, const GOperator& g, const VerifyOptions& options) {
  if (q.dim_in() != g.d || q.dim_out() != g.d) throw DimensionError("perturb_channel: dimension mismatch");
  return perturb_channel(q, max_epsilon(choi_from_kraus(q), g), g, options);
}

LemmaReport check_lemma_conditions(const Matrix& j, Index d, double tol) {
  require_square(j, d * d, "check_lemma_conditions");
  LemmaReport report;
  report.tolerance = tol;
  const auto eig = hermitian_eig(j);
  const RealVector pos = eig.eigenvalues.cwiseMax(0.0);
  const RealVector neg = (-eig.eigenvalues).cwiseMax(0.0);
  const Matrix& v = eig.eigenvectors;
  report.positive_part = v * pos.cast<Complex>().asDiagonal() * v.adjoint();
  report.negative_part = v * neg.cast<Complex>().asDiagonal() * v.adjoint();
  report.marginal_positive = partial_trace(report.positive_part, d, d, Factor::first);
  report.marginal_negative = partial_trace(report.negative_part, d, d, Factor::first);
  report.marginal_residual =
      schatten_norm(partial_trace(j, d, d, Factor::first), Schatten::inf);
  report.marginal_norm = schatten_norm(report.marginal_positive, Schatten::inf);
  report.condition1 = report.marginal_residual <= tol && report.marginal_norm <= 1.0 + tol;

  const Matrix complement = Matrix::Identity(d * d, d * d) - antisym_projector(d);
  const Matrix twisted = partial_transpose(j, d, d, Factor::second);
  report.condition2_residual = (complement * twisted * complement).norm();
  report.condition2 = report.condition2_residual <= tol;
  return report;
}

}  // namespace gatefid
