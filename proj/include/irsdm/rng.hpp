// SPDX-License-Identifier: Apache-2.0
//
// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every draw is
// a pure function of (key, counter), so a solve seeded with (seed, stream)
// yields the same numbers no matter which thread or order runs it.

#ifndef IRSDM_RNG_HPP_
#define IRSDM_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

#include "irsdm/types.hpp"

namespace irsdm {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

/// Sequential view over one Philox stream. The key is the user seed; the
/// upper counter half selects the stream, the lower half counts blocks.
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (lane_ == 4) {
      block_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                              static_cast<std::uint32_t>(counter_ >> 32),
                              static_cast<std::uint32_t>(stream_),
                              static_cast<std::uint32_t>(stream_ >> 32)},
                             key_);
      ++counter_;
      lane_ = 0;
    }
    return block_[lane_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (one output per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  cplx unit_phase() { return std::polar(1.0, 2.0 * kPi * uniform()); }

  /// Circularly-symmetric complex Gaussian with unit variance.
  cplx complex_normal() {
    return cplx(normal(), normal()) * std::sqrt(0.5);
  }

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  PhiloxBlock block_{};
  int lane_ = 4;
};

/// Vector of n entries e^{j phi}, phi uniform on [0, 2 pi).
inline CVec random_phases(PhiloxStream& rng, Eigen::Index n) {
  CVec out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(k) = rng.unit_phase();
  return out;
}

/// Uniformly distributed unit vector in C^n.
inline CVec random_unit_vector(PhiloxStream& rng, Eigen::Index n) {
  CVec out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(k) = rng.complex_normal();
  return out / out.norm();
}

}  // namespace irsdm

#endif  // IRSDM_RNG_HPP_
