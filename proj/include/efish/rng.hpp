#pragma once

#include <cstdint>

namespace efish {

/// SplitMix64 finalizer (bijective 64-bit mixing).
std::uint64_t mix64(std::uint64_t v);

/// Counter-based per-trial seed derivation: deterministic and platform
/// independent, so parallel trial scheduling never changes results.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                          std::uint64_t stream);

/// Small deterministic generator (SplitMix64 stream + Box-Muller normals).
/// Standard-library distributions are implementation-defined, so noise drawn
/// here is reproducible bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_double();    // uniform on [0, 1)
  double next_gaussian();  // standard normal

 private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace efish
