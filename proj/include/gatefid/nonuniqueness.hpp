#pragma once

// Distinct channels with identical gate fidelity functions.
//
// For d >= 4 the perturbation G is defined through its partial transpose
//   S = sum_i |alpha_i><beta_i| + |beta_i><alpha_i|,   J(G) = (I (x) T)(S),
// with alpha_1 = |01>-|10>, beta_1 = |23>-|32>, alpha_2 = |02>-|20>,
// beta_2 = |13>-|31>, alpha_3 = |03>-|30>, beta_3 = |12>-|21> (each over
// sqrt 2), embedded in the first four basis states when d > 4. S lives on the
// antisymmetric subspace, so tr[S (psi (x) psi)(psi (x) psi)^dagger] = 0 and
// Q + eps G has the same gate fidelity as Q for every pure state.

#include <cstdint>
#include <string>

#include "gatefid/channel.hpp"
#include "gatefid/stats.hpp"

namespace gatefid {

struct GOperator {
  Index d = 0;
  Matrix choi;          // J(G), d^2 x d^2, output factor first
  Matrix antisym_image;  // S = (I (x) T)(J(G))

  ChoiMatrix as_choi() const { return {d, d, choi}; }
};

GOperator build_g_operator(Index d);

/// Largest eps with J(Q) + eps J(G) >= 0 guaranteed: lambda_min(J(Q)) / ||J(G)||_inf.
/// Both matrices use the unnormalized Choi convention (tr J(Q) = d).
double max_epsilon(const ChoiMatrix& jq, const GOperator& g);

/// Normalization used by max_epsilon, reported in certificates.
inline constexpr const char* kChoiNormalization = "unnormalized (trace = d)";

struct DepolarizingFit {
  double distance = 0.0;  // min_p ||J(R) - J(depolarizing(p, d))||_2
  double p = 0.0;
};

/// Golden-section search over p in [0, 1] to 1e-10.
DepolarizingFit depolarizing_fit(const QuantumChannel& r);
double depolarizing_distance(const QuantumChannel& r);

struct PairVerification {
  std::int64_t samples = 0;
  double fidelity_residual_max = 0.0;  // max |F_Q(phi) - F_R(phi)| over Haar samples
  double fidelity_std_r = 0.0;         // sample std of F_R
  CptpReport q_report;
  CptpReport r_report;
  double choi_distance = 0.0;          // ||J(R) - J(Q)||_2
  double adjoint_choi_distance = 0.0;  // ||J(R) - J(Q^dagger)||_2
  double depolarizing_distance_r = 0.0;
};

struct VerifyOptions {
  std::int64_t samples = 10000;
  RngSpec rng;
  unsigned threads = 0;
  double cptp_tolerance = 1e-9;
};

/// Samples the gate fidelity of both channels against the identity and
/// collects the distinctness witnesses.
PairVerification verify_pair(const QuantumChannel& q, const QuantumChannel& r,
                             const VerifyOptions& options = {});

struct NonUniqPair {
  QuantumChannel q;
  QuantumChannel r;
  double epsilon = 0.0;
  double max_epsilon = 0.0;
  PairVerification verification;
};

/// R = Q + eps G, rebuilt in canonical Kraus form from J(Q) + eps J(G).
/// Requires 0 < eps <= max_epsilon and a full-rank J(Q).
NonUniqPair perturb_channel(const QuantumChannel& q, double eps, const GOperator& g,
                            const VerifyOptions& options = {});

/// Same with eps = max_epsilon.
NonUniqPair perturb_channel(const QuantumChannel& q, const GOperator& g,
                            const VerifyOptions& options = {});

/// Sufficient conditions for J to be the Choi matrix of a difference of two
/// channels with equal gate fidelity:
///   1. J = A - B with A, B >= 0 and tr_out A = tr_out B = I;
///   2. (I (x) T)(J) is supported on the antisymmetric subspace.
/// A and B are the positive and negative spectral parts of J. Condition 1 is
/// decided constructively: with M = tr_out(A) = tr_out(B) and ||M|| <= 1,
/// adding (I/d) (x) (I - M) to both parts completes them to channels.
struct LemmaReport {
  Matrix positive_part;
  Matrix negative_part;
  Matrix marginal_positive;  // tr_out A
  Matrix marginal_negative;  // tr_out B
  double marginal_residual = 0.0;  // ||tr_out J||_inf
  double marginal_norm = 0.0;      // ||tr_out A||_inf
  bool condition1 = false;
  double condition2_residual = 0.0;  // ||(I - P_a) (I (x) T)(J) (I - P_a)||_2
  bool condition2 = false;
  double tolerance = 0.0;
};

LemmaReport check_lemma_conditions(const Matrix& j, Index d, double tol = 1e-12);

}  // namespace gatefid
