#include "gatefid/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <thread>

#include "gatefid/detail/fidelity_kernel.hpp"
#include "gatefid/fidelity.hpp"

namespace gatefid {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

RngSpec RngSpec::stream(std::uint64_t id) const {
  return {splitmix64(seed ^ splitmix64(id + 0x5151)), algorithm_id};
}

FidelityStats summarize(std::span<const double> values, const RngSpec& rng) {
  FidelityStats s;
  s.rng = rng;
  s.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = std::clamp(sum / static_cast<double>(s.n), s.min, s.max);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.n - 1);
  }
  s.std_error = std::sqrt(s.variance / static_cast<double>(s.n));
  return s;
}

Rng::Rng(const RngSpec& spec) : engine_(splitmix64(spec.seed)) {
  if (spec.algorithm_id != RngSpec::kAlgorithm) {
    throw DomainError("Rng: unsupported algorithm_id '" + spec.algorithm_id + "'");
  }
}

double Rng::uniform() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

Vector gaussian_vector(Index d, Rng& rng) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = Complex(re, im);
  }
  return v;
}

}  // namespace

PureState haar_random_state(Index d, Rng& rng) {
  if (d < 1) throw DimensionError("haar_random_state: d must be positive");
  return PureState::normalized(gaussian_vector(d, rng));
}

Matrix haar_random_unitary(Index d, Rng& rng) {
  if (d < 1) throw DimensionError("haar_random_unitary: d must be positive");
  Matrix z(d, d);
  for (Index j = 0; j < d; ++j) z.col(j) = gaussian_vector(d, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

QuantumChannel random_channel(Index d, Index kraus_count, Rng& rng) {
  if (d < 1 || kraus_count < 1) throw DimensionError("random_channel: bad dimensions");
  const Matrix u = haar_random_unitary(d * kraus_count, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(static_cast<std::size_t>(kraus_count));
  for (Index k = 0; k < kraus_count; ++k) kraus.push_back(u.block(k * d, 0, d, d));
  return QuantumChannel(d, d, std::move(kraus));
}

QuantumChannel random_unital_channel(Index d, Index terms, Rng& rng) {
  if (d < 1 || terms < 1) throw DimensionError("random_unital_channel: bad dimensions");
  const double weight = 1.0 / static_cast<double>(terms);
  std::vector<Matrix> kraus;
  std::vector<Index> strata(static_cast<std::size_t>(d));
  for (Index k = 0; k < terms; ++k) {
    // One jittered phase per stratum of [-pi/2, pi/2], randomly assigned to the diagonal.
    std::iota(strata.begin(), strata.end(), Index{0});
    for (Index i = d - 1; i > 0; --i) {
      const auto j = static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
      std::swap(strata[static_cast<std::size_t>(i)], strata[static_cast<std::size_t>(j)]);
    }
    Vector phases(d);
    for (Index i = 0; i < d; ++i) {
      const double u = (static_cast<double>(strata[static_cast<std::size_t>(i)]) + rng.uniform()) /
                       static_cast<double>(d);
      phases(i) = std::polar(1.0, std::numbers::pi * (u - 0.5));
    }
    kraus.push_back(std::sqrt(weight) * Matrix(phases.asDiagonal()));
  }
  return QuantumChannel(d, d, std::move(kraus));
}

unsigned default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<double> sample_haar(Index d, Index n, const RngSpec& rng,
                                const std::function<double(const Vector&)>& f, unsigned threads) {
  if (d < 1) throw DimensionError("sample_haar: d must be positive");
  if (n < 0) throw DomainError("sample_haar: negative sample count");
  std::vector<double> out(static_cast<std::size_t>(n));
  const Index chunks = (n + kSampleChunk - 1) / kSampleChunk;
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index c = next++; c < chunks; c = next++) {
      Rng local(rng.stream(static_cast<std::uint64_t>(c)));
      const Index end = std::min(n, (c + 1) * kSampleChunk);
      for (Index i = c * kSampleChunk; i < end; ++i) {
        out[static_cast<std::size_t>(i)] = f(haar_random_state(d, local).amplitudes());
      }
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<Index>(threads, std::max<Index>(chunks, 1)));
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  return out;
}

std::vector<double> sample_gate_fidelities(const KrausMap& e, const Matrix& u, Index n,
                                           const RngSpec& rng, unsigned threads) {
  if (e.dim_in() != e.dim_out()) throw DimensionError("sample_gate_fidelities: channel is not square");
  require_unitary(u, "sample_gate_fidelities");
  if (u.rows() != e.dim_in()) throw DimensionError("sample_gate_fidelities: dimension mismatch");
  const bool is_identity = u.isIdentity(0.0);
  return sample_haar(
      e.dim_in(), n, rng,
      [&](const Vector& phi) {
        if (is_identity) return detail::gate_fidelity_kernel(e, phi, phi);
        const Vector target = u * phi;
        return detail::gate_fidelity_kernel(e, target, phi);
      },
      threads);
}

FidelityStats mc_fidelity_stats(const KrausMap& e, const Matrix& u, Index n, const RngSpec& rng,
                                unsigned threads) {
  if (n < 2) throw DomainError("mc_fidelity_stats: need at least two samples");
  const auto values = sample_gate_fidelities(e, u, n, rng, threads);
  return summarize(values, rng);
}

double levy_c1() { return 1.0 / (9.0 * std::pow(std::numbers::pi, 3) * std::numbers::ln2); }

double lipschitz_constant() { return 3.0 * std::numbers::sqrt2; }

ConcentrationBound levy_bound(double d, double epsilon, double lipschitz, double c1) {
  if (!(d >= 2.0)) throw DomainError("levy_bound: d must be >= 2");
  if (!(epsilon > 0.0)) throw DomainError("levy_bound: epsilon must be positive");
  if (!(lipschitz > 0.0) || !(c1 > 0.0)) throw DomainError("levy_bound: constants must be positive");
  ConcentrationBound b{d, epsilon, lipschitz, 0.0, 0.0};
  b.two_sided_bound = 4.0 * std::exp(-2.0 * d * c1 * epsilon * epsilon / (lipschitz * lipschitz));
  b.one_sided_bound = b.two_sided_bound / 2.0;
  return b;
}

double deviation_fraction(std::span<const double> values, double center, double eps) {
  if (values.empty()) return 0.0;
  const auto hits = std::count_if(values.begin(), values.end(),
                                  [&](double v) { return std::abs(v - center) >= eps; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

double binomial_stderr(double p, std::int64_t n) {
  if (n <= 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double empirical_deviation_fraction(const KrausMap& e, const Matrix& u, double eps, Index n,
                                    const RngSpec& rng, unsigned threads) {
  if (!(eps > 0.0)) throw DomainError("empirical_deviation_fraction: epsilon must be positive");
  const double average = average_gate_fidelity(e, u);
  const auto values = sample_gate_fidelities(e, u, n, rng, threads);
  return deviation_fraction(values, average, eps);
}

std::vector<ConvergenceRow> convergence_report(const ChannelFamily& family,
                                               std::span<const Index> dims, Index n,
                                               const RngSpec& rng,
                                               std::span<const double> eps_grid,
                                               unsigned threads) {
  if (!std::is_sorted(dims.begin(), dims.end())) {
    throw DomainError("convergence_report: dimensions must be ascending");
  }
  if (n < 2) throw DomainError("convergence_report: need at least two samples");
  std::vector<ConvergenceRow> rows;
  for (Index d : dims) {
    const RngSpec base = rng.stream(static_cast<std::uint64_t>(d));
    Rng channel_rng(base.stream(~0ull));
    const QuantumChannel ch = family(d, channel_rng);
    const Matrix id = Matrix::Identity(d, d);
    const auto values = sample_gate_fidelities(ch, id, n, base, threads);
    const FidelityStats stats = summarize(values, base);
    const double average = average_gate_fidelity(ch, id);

    double m4 = 0.0;
    for (double v : values) m4 += std::pow(v - stats.mean, 4);
    m4 /= static_cast<double>(n);
    const double stddev = std::sqrt(stats.variance);
    const double var_se = std::sqrt(std::max(0.0, m4 - stats.variance * stats.variance) /
                                    static_cast<double>(n));

    for (double eps : eps_grid) {
      ConvergenceRow row;
      row.d = d;
      row.n = n;
      row.mean = stats.mean;
      row.variance = stats.variance;
      row.stddev = stddev;
      row.var_bound_exact = variance_bound_exact(static_cast<double>(d));
      row.var_bound_conc = variance_bound_concentration(static_cast<double>(d));
      row.eps = eps;
      row.levy_bound = levy_bound(static_cast<double>(d), eps).two_sided_bound;
      row.emp_fraction = deviation_fraction(values, average, eps);
      row.seed = rng.seed;
      row.stddev_error = stddev > 0.0 ? var_se / (2.0 * stddev) : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
  std::string out =
      "d,n,mean,variance,std,var_bound_exact,var_bound_conc,eps,levy_bound,emp_fraction,seed\n";
  char buf[512];
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%llu\n",
                  static_cast<long long>(r.d), static_cast<long long>(r.n), r.mean, r.variance,
                  r.stddev, r.var_bound_exact, r.var_bound_conc, r.eps, r.levy_bound,
                  r.emp_fraction, static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

}  // namespace gatefid
