#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace uqdc {

/// Philox4x32-10 counter-based generator. Every draw is addressed by an
/// index, so results do not depend on evaluation order or thread count.
class CounterRng {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  /// Raw Philox4x32-10 bijection of (counter, key).
  [[nodiscard]] static Block philox(Block counter, std::array<std::uint32_t, 2> key) noexcept;

  [[nodiscard]] Block block(std::uint64_t index) const noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  [[nodiscard]] double uniform(std::uint64_t index) const noexcept;
  /// Standard normal via Box-Muller on the two 64-bit halves of one block.
  [[nodiscard]] double normal(std::uint64_t index) const noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream id for a named stage and order, e.g. ("initial", 0) or ("rejection", n).
[[nodiscard]] std::uint64_t derive_stream(std::string_view stage, std::uint64_t n = 0) noexcept;

/// Seed of replicate k; replicate 0 keeps the base seed.
[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t k) noexcept;

}  // namespace uqdc
