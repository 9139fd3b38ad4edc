#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace gatefid {

/// Documented default seed; the GATEFID_SEED environment variable overrides it
/// in the CLI.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Seed plus the identifier of the generator that consumes it. The stream for
/// a given seed is defined bit-for-bit: std::mt19937_64 seeded through
/// splitmix64, uniforms from the top 53 bits, normals by Box-Muller.
struct RngSpec {
  static constexpr const char* kAlgorithm = "mt19937_64+splitmix64/box-muller/v1";

  std::uint64_t seed = kDefaultSeed;
  std::string algorithm_id = kAlgorithm;

  /// Independent sub-stream for partition `id` of a sampling job.
  RngSpec stream(std::uint64_t id) const;

  bool operator==(const RngSpec&) const = default;
};

/// Summary of the gate fidelity as a random variable over Haar states.
struct FidelityStats {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double min = 0.0;
  double max = 0.0;
  double std_error = 0.0;  // sqrt(variance / n)
  RngSpec rng;

  bool operator==(const FidelityStats&) const = default;
};

/// Two-pass summary of a sample. The mean is clamped into [min, max].
FidelityStats summarize(std::span<const double> values, const RngSpec& rng);

}  // namespace gatefid
