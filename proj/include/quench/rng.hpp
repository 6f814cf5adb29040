// Copyright 2026 The Quench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace quench {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Every stream is addressed by (seed, stream): the 64-bit seed is the
/// cipher key and the stream id occupies the upper counter words, so
/// trajectories, twirl copies, and measurement samples each get an
/// independent, reproducible stream without coordination.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0)
      : key0_(static_cast<std::uint32_t>(seed)),
        key1_(static_cast<std::uint32_t>(seed >> 32)),
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  std::uint32_t next_u32() {
    if (avail_ == 0) refill();
    return out_[--avail_];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Standard normal via Box-Muller (pair cached).
  double next_normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_normal_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

  /// One Philox block for an explicit counter/key, exposed for known-answer
  /// tests and seed derivation.
  static void block(const std::uint32_t ctr[4], const std::uint32_t key[2],
                    std::uint32_t out[4]) {
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * c0;
      const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * c2;
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0;
      c1 = n1;
      c2 = n2;
      c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
  }

  /// Deterministic sub-seed from a seed and a path of indices, e.g.
  /// derive(master, {step, fold, copy}). Chains one Philox block per pair
  /// of path elements.
  static std::uint64_t derive(std::uint64_t seed,
                              std::initializer_list<std::uint64_t> path) {
    std::uint64_t acc = seed;
    const std::uint64_t* it = path.begin();
    std::size_t remaining = path.size();
    do {
      const std::uint64_t a = remaining > 0 ? *it++ : 0;
      if (remaining > 0) --remaining;
      const std::uint64_t b = remaining > 0 ? *it++ : 0;
      if (remaining > 0) --remaining;
      const std::uint32_t ctr[4] = {
          static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
      const std::uint32_t key[2] = {static_cast<std::uint32_t>(acc),
                                    static_cast<std::uint32_t>(acc >> 32)};
      std::uint32_t out[4];
      block(ctr, key, out);
      acc = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    } while (remaining > 0);
    return acc;
  }

 private:
  void refill() {
    const std::uint32_t ctr[4] = {static_cast<std::uint32_t>(counter_),
                                  static_cast<std::uint32_t>(counter_ >> 32),
                                  stream_lo_, stream_hi_};
    const std::uint32_t key[2] = {key0_, key1_};
    block(ctr, key, out_);
    ++counter_;
    avail_ = 4;
  }

  std::uint32_t key0_, key1_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint64_t counter_ = 0;
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int avail_ = 0;
  double cached_normal_ = 0.0;
  bool have_normal_ = false;
};

}  // namespace quench
