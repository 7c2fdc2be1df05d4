// Copyright 2026 qecplan Contributors
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

#ifndef QECPLAN_PHILOX_H
#define QECPLAN_PHILOX_H

#include <array>
#include <cstdint>

namespace qecplan {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The output is
/// a pure function of (counter, key), so any shot's random stream can be
/// regenerated without touching the others.
class Philox4x32 {
   public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

/// Random stream for one Monte Carlo shot: key = seed, counter = (block, shot).
class ShotStream {
   public:
    ShotStream(std::uint64_t seed, std::uint64_t shot)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          shot_lo_(static_cast<std::uint32_t>(shot)),
          shot_hi_(static_cast<std::uint32_t>(shot >> 32)) {
    }

    std::uint64_t next_u64() {
        if (cursor_ == 2) {
            buffer_ = Philox4x32::block({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                         shot_lo_, shot_hi_},
                                        key_);
            ++block_;
            cursor_ = 0;
        }
        std::uint64_t v = (std::uint64_t{buffer_[2 * cursor_]} << 32) | buffer_[2 * cursor_ + 1];
        ++cursor_;
        return v;
    }

   private:
    Philox4x32::Key key_;
    std::uint32_t shot_lo_;
    std::uint32_t shot_hi_;
    std::uint64_t block_ = 0;
    Philox4x32::Counter buffer_{};
    int cursor_ = 2;
};

/// SplitMix64 finalizer; used to derive independent sub-seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(mix64(seed) ^ a) ^ b);
}

}  // namespace qecplan

#endif
