#pragma once

// Quantum channels in Kraus and Choi form.
//
// Choi convention: J(L) = sum_{a,b} L(|a><b|) (x) |a><b|, output factor first,
// unnormalized (tr J = dim_in for trace-preserving maps). Equivalently
// J = sum_k vec(K_k) vec(K_k)^dagger with row-major vec.

#include <vector>

#include "gatefid/linalg.hpp"

namespace gatefid {

/// Default tolerance for trace preservation and CP checks.
inline constexpr double kChannelTolerance = 1e-10;
/// Default absolute cutoff on Choi eigenvalues when extracting Kraus operators.
inline constexpr double kRankTolerance = 1e-10;

/// Completely positive map given by Kraus operators, dim_out x dim_in each.
/// No trace-preservation requirement; see QuantumChannel.
class KrausMap {
 public:
  KrausMap(Index dim_in, Index dim_out, std::vector<Matrix> kraus);

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

  /// Entrywise max of |sum K^dagger K - I|.
  double trace_preservation_residual() const;

 private:
  Index dim_in_;
  Index dim_out_;
  std::vector<Matrix> kraus_;
};

/// A CPTP map: a KrausMap with sum K^dagger K = I within tolerance.
class QuantumChannel : public KrausMap {
 public:
  explicit QuantumChannel(KrausMap map, double tol = kChannelTolerance);
  QuantumChannel(Index dim_in, Index dim_out, std::vector<Matrix> kraus,
                 double tol = kChannelTolerance);

  static QuantumChannel identity(Index d);
};

struct ChoiMatrix {
  Index dim_in = 0;
  Index dim_out = 0;
  Matrix matrix;  // (dim_out*dim_in) square, output factor first
};

struct CptpReport {
  bool is_cp = false;
  bool is_tp = false;
  double min_eigenvalue = 0.0;
  double tp_residual = 0.0;         // operator norm of tr_out(J) - I
  double hermitian_residual = 0.0;  // entrywise max of |J - J^dagger|
  double tolerance = 0.0;

  bool ok() const { return is_cp && is_tp; }
};

ChoiMatrix choi_from_kraus(const KrausMap& map);

/// Canonical Kraus set: eigenvectors of J in descending eigenvalue order,
/// K_i = unvec(sqrt(l_i) v_i), first nonzero component of each v_i made real
/// positive. Eigenvalues below rank_tol are dropped.
KrausMap kraus_map_from_choi(const ChoiMatrix& choi, double rank_tol = kRankTolerance);
QuantumChannel kraus_from_choi(const ChoiMatrix& choi, double rank_tol = kRankTolerance);

/// Never throws on a well-shaped input; a non-Hermitian J is reported as not CP.
CptpReport validate_cptp(const ChoiMatrix& choi, double tol = kChannelTolerance);

/// Unitary 1-design on C^d with the identity first: n-qubit Pauli strings when
/// d = 2^n, Heisenberg-Weyl clock/shift products X^a Z^b otherwise.
std::vector<Matrix> unitary_one_design(Index d);

/// rho -> p rho + (1-p) I/d.
QuantumChannel depolarizing(double p, Index d);
ChoiMatrix depolarizing_choi(double p, Index d);

QuantumChannel unitary_channel(const Matrix& u);

/// Kraus set {K_i^dagger}; unital but generally not trace preserving.
KrausMap adjoint(const KrausMap& map);

/// second o first, canonicalized through the Choi matrix.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

Matrix apply(const KrausMap& map, const Matrix& rho);
/// tr_in[J (I (x) rho^T)].
Matrix apply(const ChoiMatrix& choi, const Matrix& rho);

/// Lambda = U^dagger o E.
QuantumChannel reduce_to_lambda(const QuantumChannel& e, const Matrix& u);

QuantumChannel canonicalize(const QuantumChannel& ch);

/// E (x) id_k: the trivial embedding into dimension d*k.
QuantumChannel tensor_identity(const QuantumChannel& ch, Index k);

/// Frobenius distance between Choi matrices.
double choi_distance(const KrausMap& a, const KrausMap& b);

}  // namespace gatefid
