#pragma once

#include "gatefid/channel.hpp"

namespace gatefid::detail {

/// sum_k |<target| K_k |phi>|^2 with no shape or range checks. Hot loop of the
/// Monte Carlo estimators.
inline double gate_fidelity_kernel(const KrausMap& e, const Vector& target, const Vector& phi) {
  double total = 0.0;
  for (const Matrix& k : e.kraus()) total += std::norm(target.dot(k * phi));
  return total;
}

}  // namespace gatefid::detail
