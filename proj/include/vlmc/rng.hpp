#pragma once

#include <array>
#include <cstdint>

namespace vlmc {

/// One Philox4x32-10 block: a keyed bijection of the 128-bit counter.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based generator. The 64-bit master seed is the Philox key; the
/// 128-bit counter is (block index, stream index), so stream s of seed k is
/// the sequence philox(k, (0, s)), philox(k, (1, s)), ... Streams never
/// overlap and any (seed, stream) pair can be opened directly, which is how
/// Monte-Carlo trial i gets its own reproducible stream whatever the thread
/// layout. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (lane_ == 4) refill();
    const std::uint64_t lo = buffer_[lane_];
    const std::uint64_t hi = buffer_[lane_ + 1];
    lane_ += 2;
    return (hi << 32) | lo;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned lane_ = 4;
};

}  // namespace vlmc
