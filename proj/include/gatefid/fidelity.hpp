#pragma once

#include <cstdint>

#include "gatefid/channel.hpp"
#include "gatefid/stats.hpp"

namespace gatefid {

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 of two density
/// matrices. Square roots via eigendecomposition with eigenvalues clamped at 0.
double state_fidelity(const Matrix& rho, const Matrix& sigma);

/// tr(U(phi phi^dagger) E(phi phi^dagger)) = sum_k |<U phi| K_k |phi>|^2.
double gate_fidelity_pure(const KrausMap& e, const Matrix& u, const PureState& phi);

/// Same with U = I.
double gate_fidelity_pure(const KrausMap& e, const PureState& phi);

/// Haar average of the gate fidelity, (sum_i |tr K_i|^2 + d)/(d^2 + d) over the
/// Kraus operators K_i of U^dagger o E.
double average_gate_fidelity(const KrausMap& e, const Matrix& u);
double average_gate_fidelity(const KrausMap& e);

/// p + (1-p)/d, the constant gate fidelity of a depolarizing channel.
double depolarizing_gate_fidelity(double p, std::int64_t d);

/// tr[(I (x) T)(J) (psi psi^dagger (x) psi psi^dagger)]. Equals the gate
/// fidelity against the identity for any (not necessarily CP) map with Choi J.
double choi_bilinear_fidelity(const Matrix& choi, const PureState& psi);

/// C = 1/(81 pi^3 ln 2), the concentration constant with K = 3 sqrt(2).
double concentration_constant();

/// (8d^3 + 16d^2 + 4d) / ((d^2 + 2d + 1)(d^2 + 5d + 1)), valid for any channel.
double variance_bound_exact(double d);
/// (4 + ln(Cd)) / (Cd), capped at 1/4 (and equal to 1/4 when Cd <= 1).
double variance_bound_concentration(double d);
/// The n-qubit display (4 + ln C + n/ln 2) / (C 2^n). Its numerator dominates
/// 4 + ln(C 2^n) for n >= 1, so it is a looser but still valid bound.
double variance_bound_concentration_qubits(int qubits);

struct FidelityBoundSet {
  double d = 0.0;
  double variance_bound_exact = 0.0;
  double variance_bound_concentration = 0.0;
  double constant = 0.0;  // C
};

FidelityBoundSet variance_bounds(double d);

/// L2 distance between the gate fidelity of E (against I) and that of the
/// depolarizing channel with the same average: the standard deviation.
double l2_distance_to_depolarizing(const FidelityStats& stats);

}  // namespace gatefid
