#pragma once

// Haar sampling, Monte Carlo gate-fidelity statistics and concentration bounds.
//
// Sample i of a job is drawn from sub-stream i / kSampleChunk of the job's
// RngSpec, so results are bit-identical for any worker count.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gatefid/channel.hpp"
#include "gatefid/stats.hpp"

namespace gatefid {

inline constexpr Index kSampleChunk = 1024;

class Rng {
 public:
  explicit Rng(const RngSpec& spec);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Normalized vector of 2d independent standard normals.
PureState haar_random_state(Index d, Rng& rng);

/// QR of a complex Ginibre matrix with the phases of R's diagonal divided out.
Matrix haar_random_unitary(Index d, Rng& rng);

/// Random CPTP map with `kraus_count` Kraus operators cut from a Haar isometry
/// C^d -> C^{kraus_count * d}. kraus_count >= d^2 gives a full-rank channel
/// almost surely.
QuantumChannel random_channel(Index d, Index kraus_count, Rng& rng);

/// Equal-weight mixture of `terms` random diagonal unitaries. Each phase is
/// uniform in [-pi/2, pi/2]; within a term the d phases are stratified, one per
/// interval of width pi/d. Unital.
QuantumChannel random_unital_channel(Index d, Index terms, Rng& rng);

/// Worker count used when a caller passes 0.
unsigned default_thread_count();

/// f(phi_i) for n Haar states phi_i in C^d.
std::vector<double> sample_haar(Index d, Index n, const RngSpec& rng,
                                const std::function<double(const Vector&)>& f,
                                unsigned threads = 0);

/// Gate fidelity of (E, U) on n Haar states.
std::vector<double> sample_gate_fidelities(const KrausMap& e, const Matrix& u, Index n,
                                           const RngSpec& rng, unsigned threads = 0);

FidelityStats mc_fidelity_stats(const KrausMap& e, const Matrix& u, Index n,
                                const RngSpec& rng, unsigned threads = 0);

/// 1/(9 pi^3 ln 2).
double levy_c1();
/// 3 sqrt(2).
double lipschitz_constant();

struct ConcentrationBound {
  double d = 0.0;
  double epsilon = 0.0;
  double lipschitz = 0.0;
  double two_sided_bound = 0.0;  // 4 exp(-2 d C1 eps^2 / K^2)
  double one_sided_bound = 0.0;
};

ConcentrationBound levy_bound(double d, double epsilon, double lipschitz = lipschitz_constant(),
                              double c1 = levy_c1());

/// Fraction of values with |v - center| >= eps.
double deviation_fraction(std::span<const double> values, double center, double eps);

/// sqrt(p (1-p) / n).
double binomial_stderr(double p, std::int64_t n);

/// Fraction of n Haar states whose fidelity deviates from the closed-form
/// average by at least eps.
double empirical_deviation_fraction(const KrausMap& e, const Matrix& u, double eps, Index n,
                                    const RngSpec& rng, unsigned threads = 0);

using ChannelFamily = std::function<QuantumChannel(Index d, Rng& rng)>;

struct ConvergenceRow {
  Index d = 0;
  Index n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double stddev = 0.0;
  double var_bound_exact = 0.0;
  double var_bound_conc = 0.0;
  double eps = 0.0;
  double levy_bound = 0.0;
  double emp_fraction = 0.0;
  std::uint64_t seed = 0;
  double stddev_error = 0.0;  // delta-method standard error of stddev; not in the CSV
};

/// Default epsilon grid for reports.
inline const std::vector<double> kDefaultEpsGrid{0.25, 0.1, 0.05};

/// One row per (d, eps). The channel for each d is drawn from its own stream,
/// the fidelity sample is shared across the eps grid and centered on the
/// closed-form average.
std::vector<ConvergenceRow> convergence_report(const ChannelFamily& family,
                                               std::span<const Index> dims, Index n,
                                               const RngSpec& rng,
                                               std::span<const double> eps_grid = kDefaultEpsGrid,
                                               unsigned threads = 0);

/// Columns d,n,mean,variance,std,var_bound_exact,var_bound_conc,eps,levy_bound,emp_fraction,seed.
std::string convergence_csv(std::span<const ConvergenceRow> rows);

}  // namespace gatefid
