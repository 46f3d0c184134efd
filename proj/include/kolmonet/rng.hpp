#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace kolmonet {

/// Philox4x32-10 block function (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Purpose tags separating the substreams drawn from one seed.
enum class StreamTag : std::uint32_t {
  kBrownian = 1,
  kSpaceTime = 2,
  kOracle = 3,
  kTest = 4,
};

/// Deterministic stream of uniforms and normals addressed by
/// (seed, a, b, tag). Any two distinct addresses give independent streams,
/// and a stream's values never depend on what else has been drawn.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint32_t a, std::uint32_t b, StreamTag tag)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        a_(a), b_(b), tag_(static_cast<std::uint32_t>(tag)) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    if (pos_ == 4) refill();
    const std::uint64_t hi = block_[pos_++];
    if (pos_ == 4) refill();
    const std::uint64_t lo = block_[pos_++];
    const std::uint64_t bits = ((hi << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Box-Muller transform.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  void refill() {
    block_ = philox4x32({a_, b_, tag_, counter_++}, key_);
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t a_, b_, tag_;
  std::uint32_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kolmonet
