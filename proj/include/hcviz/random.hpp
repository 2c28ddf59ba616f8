#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace hcviz {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Sub-seed for stream `index` of a master seed. Used for per-trial and
/// per-stage seeds so results do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) noexcept;

/// mt19937_64 with hand-rolled bounded draws: the std distributions are
/// implementation-defined, which would break cross-platform determinism.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n). n must be > 0.
  std::size_t index(std::size_t n);
  /// Uniform in [0, 1) with 53 bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

}  // namespace hcviz
