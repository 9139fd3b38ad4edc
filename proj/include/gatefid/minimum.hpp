#pragma once

// Minimum gate fidelity: epsilon-nets on pure states, the Lipschitz lower
// bound, a local-search reference minimizer and the effective minimum.

#include <cstdint>
#include <string>
#include <vector>

#include "gatefid/channel.hpp"
#include "gatefid/stats.hpp"

namespace gatefid {

/// min over unit phases c of ||phi - c psi||_2 = sqrt(2 - 2 |<phi|psi>|).
double phase_distance(const Vector& phi, const Vector& psi);

inline constexpr const char* kEuclideanMetric = "euclidean";

struct StateNet {
  Index d = 0;
  double epsilon = 0.0;
  std::string metric_id = kEuclideanMetric;
  std::vector<PureState> states;
  double coverage_confidence = 0.0;
  RngSpec rng;
  std::int64_t validation_samples = 0;
};

struct NetOptions {
  std::int64_t max_states = 100000;
  double confidence = 0.99;
  /// Greedy packing stops after this many consecutive rejected candidates.
  std::int64_t patience = 256;
};

/// Greedy random packing followed by a sampled coverage check. Every fresh
/// Haar sample in the validation round must have a net point within epsilon;
/// a miss is added to the net and validation starts over. Throws when the
/// net would exceed max_states.
StateNet build_net(Index d, double epsilon, const RngSpec& rng, const NetOptions& options = {});

/// Number of validation samples for a net of the given size.
std::int64_t validation_sample_count(std::size_t net_size, double confidence);

struct MinEstimate {
  double net_min = 0.0;
  double lipschitz_lower_bound = 0.0;  // net_min - 3 sqrt(2) epsilon
  PureState argmin_state{Vector::Ones(1)};
  Index argmin_index = 0;
  std::string method;
};

/// Exact minimum of the gate fidelity over the net; ties go to the first index.
MinEstimate net_minimum(const KrausMap& e, const Matrix& u, const StateNet& net, unsigned threads = 0);

struct ReferenceMinimum {
  double value = 0.0;
  PureState state{Vector::Ones(1)};
  Index starts = 0;
};

/// Multi-start projected gradient descent on the unit sphere in R^{2d}, with
/// central-difference gradients (h = 1e-6) and step halving/doubling, stopped
/// when the accepted move falls below 1e-10. Extra starting states are tried
/// in addition to the n_starts Haar starts. Limited to d <= 32.
ReferenceMinimum reference_minimum(const KrausMap& e, const Matrix& u, Index n_starts,
                                   const RngSpec& rng,
                                   const std::vector<PureState>& extra_starts = {});

/// sqrt(81 pi^3 ln 2 ln(2/Q) / d).
double effective_epsilon(double q, double d);

struct EffectiveMinimum {
  double average = 0.0;
  double q = 0.0;
  double d = 0.0;
  double epsilon = 0.0;
  double lower = 0.0;  // max(0, average - epsilon)
  double upper = 0.0;  // average
  bool vacuous = false;  // epsilon >= average
};

EffectiveMinimum effective_minimum(double average, double q, double d);

}  // namespace gatefid
