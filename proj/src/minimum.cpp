#include "gatefid/minimum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "gatefid/detail/fidelity_kernel.hpp"
#include "gatefid/sampling.hpp"

namespace gatefid {

double phase_distance(const Vector& phi, const Vector& psi) {
  if (phi.size() != psi.size()) throw DimensionError("phase_distance: dimension mismatch");
  const double overlap = std::min(1.0, std::abs(phi.dot(psi)));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

std::int64_t validation_sample_count(std::size_t net_size, double confidence) {
  const double base = static_cast<double>(std::max<std::size_t>(net_size, 100));
  return static_cast<std::int64_t>(std::ceil(std::log(1.0 / (1.0 - confidence)) * base));
}

namespace {

bool covered(const std::vector<PureState>& net, const Vector& phi, double epsilon) {
  // |<a|b>| >= 1 - eps^2/2 is the same test without the square root.
  const double threshold = 1.0 - epsilon * epsilon / 2.0;
  for (const PureState& s : net) {
    if (std::abs(s.amplitudes().dot(phi)) >= threshold) return true;
  }
  return false;
}

}  // namespace

StateNet build_net(Index d, double epsilon, const RngSpec& rng, const NetOptions& options) {
  if (d < 1) throw DimensionError("build_net: d must be positive");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("build_net: epsilon must be positive");
  if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
    throw DomainError("build_net: confidence must lie in (0, 1)");
  }
  if (options.max_states < 1 || options.patience < 1) throw DomainError("build_net: bad budget");

  StateNet net;
  net.d = d;
  net.epsilon = epsilon;
  net.rng = rng;
  Rng packing(rng.stream(0));
  auto add = [&](PureState s) {
    if (static_cast<std::int64_t>(net.states.size()) >= options.max_states) {
      throw DomainError("build_net: net exceeds max_states = " + std::to_string(options.max_states) +
                        " before coverage was validated");
    }
    net.states.push_back(std::move(s));
  };

  add(haar_random_state(d, packing));
  for (std::int64_t rejected = 0; rejected < options.patience;) {
    PureState candidate = haar_random_state(d, packing);
    if (covered(net.states, candidate.amplitudes(), epsilon)) {
      ++rejected;
    } else {
      add(std::move(candidate));
      rejected = 0;
    }
  }

  Rng validation(rng.stream(1));
  for (;;) {
    const std::int64_t count = validation_sample_count(net.states.size(), options.confidence);
    bool clean = true;
    for (std::int64_t i = 0; i < count; ++i) {
      PureState sample = haar_random_state(d, validation);
      if (!covered(net.states, sample.amplitudes(), epsilon)) {
        add(std::move(sample));
        clean = false;
        break;
      }
    }
    if (clean) {
      net.validation_samples = count;
      break;
    }
  }
  net.coverage_confidence = options.confidence;
  return net;
}

MinEstimate net_minimum(const KrausMap& e, const Matrix& u, const StateNet& net, unsigned threads) {
  if (e.dim_in() != e.dim_out()) throw DimensionError("net_minimum: channel is not square");
  if (net.d != e.dim_in() || u.rows() != net.d) throw DimensionError("net_minimum: dimension mismatch");
  if (net.states.empty()) throw DomainError("net_minimum: empty net");
  require_unitary(u, "net_minimum");

  const std::size_t n = net.states.size();
  std::vector<double> values(n);
  auto evaluate = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Vector& phi = net.states[i].amplitudes();
      values[i] = detail::gate_fidelity_kernel(e, u * phi, phi);
    }
  };
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    evaluate(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t per = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(evaluate, std::min(n, t * per), std::min(n, (t + 1) * per));
    }
  }

  const auto best = std::min_element(values.begin(), values.end());
  MinEstimate m;
  m.argmin_index = static_cast<Index>(best - values.begin());
  m.net_min = *best;
  m.lipschitz_lower_bound = m.net_min - 3.0 * std::numbers::sqrt2 * net.epsilon;
  m.argmin_state = net.states[static_cast<std::size_t>(m.argmin_index)];
  m.method = "net";
  return m;
}

namespace {

class SphereObjective {
 public:
  SphereObjective(const KrausMap& e, const Matrix& u) : e_(e), u_(u) {}

  double operator()(const Eigen::VectorXd& x) const {
    const Vector phi = to_complex(x) / x.norm();
    return detail::gate_fidelity_kernel(e_, u_ * phi, phi);
  }

  static Vector to_complex(const Eigen::VectorXd& x) {
    const Index d = x.size() / 2;
    Vector v(d);
    for (Index i = 0; i < d; ++i) v(i) = Complex(x(2 * i), x(2 * i + 1));
    return v;
  }

  static Eigen::VectorXd to_real(const Vector& v) {
    Eigen::VectorXd x(2 * v.size());
    for (Index i = 0; i < v.size(); ++i) {
      x(2 * i) = v(i).real();
      x(2 * i + 1) = v(i).imag();
    }
    return x;
  }

 private:
  const KrausMap& e_;
  const Matrix& u_;
};

std::pair<double, Eigen::VectorXd> descend(const SphereObjective& f, Eigen::VectorXd x) {
  constexpr double h = 1e-6;
  x.normalize();
  double fx = f(x);
  double step = 0.1;
  for (int iter = 0; iter < 20000; ++iter) {
    Eigen::VectorXd grad(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd plus = x;
      Eigen::VectorXd minus = x;
      plus(i) += h;
      minus(i) -= h;
      grad(i) = (f(plus) - f(minus)) / (2.0 * h);
    }
    grad -= grad.dot(x) * x;
    if (grad.norm() == 0.0) break;

    bool moved = false;
    while (step > 1e-14) {
      const Eigen::VectorXd trial = (x - step * grad).normalized();
      const double ft = f(trial);
      if (ft < fx) {
        const double change = (trial - x).norm();
        x = trial;
        fx = ft;
        step *= 2.0;
        moved = change >= 1e-10;
        break;
      }
      step /= 2.0;
    }
    if (!moved) break;
  }
  return {fx, x};
}

}  // namespace

ReferenceMinimum reference_minimum(const KrausMap& e, const Matrix& u, Index n_starts,
                                   const RngSpec& rng, const std::vector<PureState>& extra_starts) {
  if (e.dim_in() != e.dim_out()) throw DimensionError("reference_minimum: channel is not square");
  const Index d = e.dim_in();
  if (u.rows() != d) throw DimensionError("reference_minimum: dimension mismatch");
  if (d > 32) throw DomainError("reference_minimum: limited to d <= 32");
  if (n_starts < 0) throw DomainError("reference_minimum: negative start count");
  if (n_starts == 0 && extra_starts.empty()) throw DomainError("reference_minimum: no starting states");
  require_unitary(u, "reference_minimum");

  const SphereObjective f(e, u);
  std::vector<Vector> starts;
  Rng gen(rng.stream(0));
  for (Index i = 0; i < n_starts; ++i) starts.push_back(haar_random_state(d, gen).amplitudes());
  for (const PureState& s : extra_starts) {
    if (s.dim() != d) throw DimensionError("reference_minimum: start state dimension mismatch");
    starts.push_back(s.amplitudes());
  }

  ReferenceMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  best.starts = static_cast<Index>(starts.size());
  for (const Vector& s : starts) {
    const auto [value, x] = descend(f, SphereObjective::to_real(s));
    if (value < best.value) {
      best.value = value;
      best.state = PureState::normalized(SphereObjective::to_complex(x));
    }
  }
  return best;
}

double effective_epsilon(double q, double d) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("effective_epsilon: Q must lie in (0, 1)");
  if (!(d >= 1.0)) throw DomainError("effective_epsilon: d must be positive");
  return std::sqrt(81.0 * std::pow(std::numbers::pi, 3) * std::numbers::ln2 * std::log(2.0 / q) / d);
}

EffectiveMinimum effective_minimum(double average, double q, double d) {
  if (!(average >= 0.0 && average <= 1.0)) throw DomainError("effective_minimum: average must lie in [0, 1]");
  EffectiveMinimum m;
  m.average = average;
  m.q = q;
  m.d = d;
  m.epsilon = effective_epsilon(q, d);
  m.lower = std::max(0.0, average - m.epsilon);
  m.upper = average;
  m.vacuous = m.epsilon >= average;
  return m;
}

}  // namespace gatefid
