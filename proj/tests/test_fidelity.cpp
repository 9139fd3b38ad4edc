#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gatefid/fidelity.hpp"
#include "gatefid/sampling.hpp"
#include "support.hpp"

using namespace gatefid;
using namespace gatefid::test;

TEST_CASE("state fidelity") {
  Rng rng = make_rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix rho = random_density(3, rng);
    const Matrix sigma = random_density(3, rng);
    CHECK(state_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(state_fidelity(rho, sigma) == doctest::Approx(state_fidelity(sigma, rho)).epsilon(1e-10));
    CHECK(state_fidelity(rho, sigma) <= 1.0);

    const PureState phi = haar_random_state(3, rng);
    const double overlap = phi.amplitudes().dot(sigma * phi.amplitudes()).real();
    CHECK(state_fidelity(phi.projector(), sigma) == doctest::Approx(overlap).epsilon(1e-10));
  }
  CHECK(state_fidelity(PureState::basis(2, 0).projector(), PureState::basis(2, 1).projector()) ==
        doctest::Approx(0.0));

  // Commuting qubit states: (sum sqrt(p_i q_i))^2.
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << 0.3, 0.7;
  b.diagonal() << 0.6, 0.4;
  const double expected = std::pow(std::sqrt(0.18) + std::sqrt(0.28), 2);
  CHECK(state_fidelity(a, b) == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS(state_fidelity(2.0 * a, b));
  CHECK_THROWS(state_fidelity(Matrix::Identity(3, 3) / 3.0, b));
}

TEST_CASE("pure-state gate fidelity") {
  Rng rng = make_rng(32);
  const Matrix u = haar_random_unitary(3, rng);
  const QuantumChannel ch = random_channel(3, 3, rng);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState phi = haar_random_state(3, rng);
    CHECK(gate_fidelity_pure(unitary_channel(u), u, phi) == doctest::Approx(1.0).epsilon(1e-12));
    const double f = gate_fidelity_pure(ch, u, phi);
    CHECK(f == doctest::Approx(gate_fidelity_oracle(ch, u, phi.amplitudes())).epsilon(1e-12));
    const PureState rotated(std::polar(1.0, 0.7) * phi.amplitudes());
    CHECK(gate_fidelity_pure(ch, u, rotated) == doctest::Approx(f).epsilon(1e-12));
    CHECK(gate_fidelity_pure(reduce_to_lambda(ch, u), phi) == doctest::Approx(f).epsilon(1e-12));

    // When U(phi phi^dagger) is pure, the gate fidelity is a state fidelity.
    const Matrix target = u * phi.projector() * u.adjoint();
    CHECK(state_fidelity(gatefid::apply(ch, phi.projector()), target) == doctest::Approx(f).epsilon(1e-10));
  }

  const PureState zero = PureState::basis(2, 0);
  CHECK(gate_fidelity_pure(unitary_channel(pauli_x()), zero) == doctest::Approx(0.0));
  for (Index d : {2, 5}) {
    for (double p : {0.0, 0.25, 1.0}) {
      const PureState phi = haar_random_state(d, rng);
      CHECK(gate_fidelity_pure(depolarizing(p, d), phi) ==
            doctest::Approx(p + (1.0 - p) / static_cast<double>(d)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(gate_fidelity_pure(depolarizing(0.5, 3), zero), DimensionError);

  // Hadamard target with a random channel, against the full density-matrix oracle.
  const QuantumChannel q = random_channel(2, 2, rng);
  for (int trial = 0; trial < 100; ++trial) {
    const PureState phi = haar_random_state(2, rng);
    CHECK(gate_fidelity_pure(q, hadamard(), phi) ==
          doctest::Approx(gate_fidelity_pure(reduce_to_lambda(q, hadamard()), phi)).epsilon(1e-12));
  }
}

TEST_CASE("average gate fidelity: closed form, gauge invariance, Monte Carlo oracle") {
  Rng rng = make_rng(33);
  const Matrix u = haar_random_unitary(4, rng);
  CHECK(average_gate_fidelity(unitary_channel(u), u) == doctest::Approx(1.0).epsilon(1e-12));
  for (Index d : {2, 3, 4}) {
    for (double p : {0.0, 0.3, 0.9}) {
      CHECK(average_gate_fidelity(depolarizing(p, d)) ==
            doctest::Approx(depolarizing_gate_fidelity(p, d)).epsilon(1e-12));
    }
  }
  CHECK(depolarizing_gate_fidelity(0.9, 2) == doctest::Approx(0.95));
  CHECK(depolarizing_gate_fidelity(1.0, 7) == 1.0);
  CHECK(depolarizing_gate_fidelity(0.0, 4) == doctest::Approx(0.25));
  CHECK_THROWS_AS(depolarizing_gate_fidelity(1.2, 2), DomainError);

  const QuantumChannel x = unitary_channel(pauli_x());
  CHECK(average_gate_fidelity(x) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  const FidelityStats mc = mc_fidelity_stats(x, Matrix::Identity(2, 2), 1000000, RngSpec{34});
  CHECK(std::abs(mc.mean - 1.0 / 3.0) <= 3.0 * mc.std_error);
  // F = x^2 with x uniform on [-1, 1] (a Bloch coordinate): variance 1/5 - 1/9 = 4/45.
  CHECK(l2_distance_to_depolarizing(mc) == doctest::Approx(std::sqrt(4.0 / 45.0)).epsilon(5e-3));

  const QuantumChannel ch = random_channel(3, 4, rng);
  const QuantumChannel mixed(3, 3, isometric_mix(ch.kraus(), 3, rng));
  CHECK(std::abs(average_gate_fidelity(ch) - average_gate_fidelity(mixed)) < 1e-12);
  CHECK(std::abs(average_gate_fidelity(ch) - average_gate_fidelity(canonicalize(ch))) < 1e-12);
}

TEST_CASE("Choi bilinear identity holds for CP and non-CP maps") {
  Rng rng = make_rng(35);
  for (Index d : {2, 3, 4}) {
    const QuantumChannel ch = random_channel(d, 3, rng);
    const Matrix j = choi_from_kraus(ch).matrix;
    const Matrix h = random_hermitian(d * d, rng);
    for (int trial = 0; trial < 20; ++trial) {
      const PureState psi = haar_random_state(d, rng);
      CHECK(choi_bilinear_fidelity(j, psi) == doctest::Approx(gate_fidelity_pure(ch, psi)).epsilon(1e-10));
      // A generic Hermitian "Choi matrix": compare with tr(L(psi psi^dagger) psi psi^dagger) from the
      // defining sum L(|a><b|) = sum_ij J[(i,a),(j,b)] |i><j|.
      const Vector& v = psi.amplitudes();
      Complex direct = 0.0;
      for (Index a = 0; a < d; ++a)
        for (Index b = 0; b < d; ++b)
          for (Index i = 0; i < d; ++i)
            for (Index k = 0; k < d; ++k)
              direct += h(i * d + a, k * d + b) * v(a) * std::conj(v(b)) * std::conj(v(i)) * v(k);
      CHECK(choi_bilinear_fidelity(h, psi) == doctest::Approx(direct.real()).epsilon(1e-10));
    }
  }
}

TEST_CASE("variance bounds") {
  CHECK(variance_bound_exact(4.0) == doctest::Approx(784.0 / 925.0).epsilon(1e-14));
  CHECK(concentration_constant() ==
        doctest::Approx(1.0 / (81.0 * std::pow(std::numbers::pi, 3) * std::numbers::ln2)).epsilon(1e-15));

  double previous_exact = 1e300;
  double previous_conc = 1e300;
  for (double d = 2.0; d < 1e18; d *= 3.0) {
    const FidelityBoundSet b = variance_bounds(d);
    CHECK(b.variance_bound_exact > 0.0);
    CHECK(b.variance_bound_concentration > 0.0);
    CHECK(b.variance_bound_exact <= previous_exact);
    CHECK(b.variance_bound_concentration <= previous_conc);
    CHECK(b.variance_bound_concentration <= 0.25);
    previous_exact = b.variance_bound_exact;
    previous_conc = b.variance_bound_concentration;
  }

  // For large n the qubit display dominates the d form it was derived from.
  for (int n : {20, 30, 50, 80}) {
    CHECK(variance_bound_concentration_qubits(n) >= variance_bound_concentration(std::ldexp(1.0, n)));
  }
  CHECK(variance_bound_concentration_qubits(50) == doctest::Approx(1.1e-10).epsilon(0.1));
  CHECK_THROWS_AS(variance_bound_exact(1.0), DomainError);
}

TEST_CASE("Monte Carlo variance respects the exact bound") {
  Rng rng = make_rng(36);
  for (Index d : {2, 3, 4, 8}) {
    for (int trial = 0; trial < 3; ++trial) {
      const QuantumChannel ch = random_channel(d, 1 + trial, rng);
      const auto values = sample_gate_fidelities(ch, Matrix::Identity(d, d), 4000, RngSpec{std::uint64_t(37 + trial)});
      const FidelityStats s = summarize(values, RngSpec{});
      const double var_se = variance_stderr(values);
      CHECK(s.variance <= variance_bound_exact(static_cast<double>(d)) + 5.0 * var_se);
    }
  }
}
