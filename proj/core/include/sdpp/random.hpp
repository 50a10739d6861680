#pragma once

#include <cstdint>
#include <random>

namespace sdpp {

/// SplitMix64 finalizer; used to derive well-separated engine seeds.
std::uint64_t mix64(std::uint64_t value);

/// Seed for sub-stream `substream` of replicate `replicate` under `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate, std::uint64_t substream);

/// Random source owned by one trajectory.
///
/// Gaussian and Poisson draws come from disjoint engines, so switching
/// jumps on or off leaves the Brownian path unchanged.
class RandomStream {
 public:
  enum Substream : std::uint64_t { kGaussian = 1, kJumps = 2 };

  RandomStream(std::uint64_t seed, std::uint64_t replicate);

  double gaussian();
  /// Poisson(mean) draw; mean <= 0 returns 0 without consuming randomness.
  std::uint32_t poisson(double mean);

 private:
  std::mt19937_64 gaussian_engine_;
  std::mt19937_64 jump_engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::poisson_distribution<std::uint32_t> poisson_{1.0};
};

}  // namespace sdpp
