#include "sdpp/random.hpp"

namespace sdpp {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate, std::uint64_t substream) {
  return mix64(mix64(mix64(seed) ^ replicate) ^ (substream * 0xd1342543de82ef95ULL));
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed) {
  // Expand to a full seed sequence so nearby 64-bit seeds decorrelate.
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(mix64(seed)),
                    static_cast<std::uint32_t>(mix64(seed) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replicate)
    : gaussian_engine_(make_engine(derive_seed(seed, replicate, kGaussian))),
      jump_engine_(make_engine(derive_seed(seed, replicate, kJumps))) {}

double RandomStream::gaussian() { return normal_(gaussian_engine_); }

std::uint32_t RandomStream::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  if (poisson_.mean() != mean) poisson_ = std::poisson_distribution<std::uint32_t>(mean);
  return poisson_(jump_engine_);
}

}  // namespace sdpp
