#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace popwave {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output is a pure function of (counter, key): no state, trivially parallel.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) noexcept {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{M0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{M1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += W0;
      key[1] += W1;
    }
    return ctr;
  }
};

/// Uniform double in the open interval (0, 1) from 64 random bits (52 used, so that the
/// half-offset midpoint stays exactly representable and below 1).
constexpr double uniform_open(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = (std::uint64_t{hi} << 20) | (lo >> 12);
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Standard normals for one path: variate k is a function of (seed, path, stream, k) only.
/// Box-Muller turns one Philox block into two normals, so consecutive k share a block.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t path, std::uint32_t stream = 0) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        path_lo_(static_cast<std::uint32_t>(path)),
        path_hi_(static_cast<std::uint32_t>(path >> 32)),
        stream_(stream) {}

  /// Normal variates 2 * pair and 2 * pair + 1.
  std::array<double, 2> pair(std::uint32_t pair_index) const noexcept {
    const auto r = Philox4x32::generate({pair_index, path_lo_, path_hi_, stream_}, key_);
    const double u1 = uniform_open(r[0], r[1]);
    const double u2 = uniform_open(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Two uniforms on (0, 1) from block `index`.
  std::array<double, 2> uniforms(std::uint32_t index) const noexcept {
    const auto r = Philox4x32::generate({index, path_lo_, path_hi_, stream_}, key_);
    return {uniform_open(r[0], r[1]), uniform_open(r[2], r[3])};
  }

 private:
  Philox4x32::Key key_;
  std::uint32_t path_lo_, path_hi_, stream_;
};

}  // namespace popwave
