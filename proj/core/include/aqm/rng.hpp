// Copyright 2026 The AQM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AQM_RNG_HPP_
#define AQM_RNG_HPP_

#include <array>
#include <cstdint>
#include <limits>

namespace aqm {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key).
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Independent 64-bit key for replicate `index` of a run seeded with `seed`;
/// `tag` separates unrelated uses of the same index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                          std::uint32_t tag = 0);

/// Counter-based random stream. The output is a pure function of
/// (seed, stream, substream, draw index), so any trial can be replayed in
/// isolation and parallel trials never share state.
///
/// Counter layout: word 0 is the block index within the stream, word 1 the
/// substream, words 2-3 the 64-bit stream index. The seed is the key.
///
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream,
             std::uint32_t substream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal variate (Box-Muller, no cached second value).
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint32_t substream() const { return substream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint32_t substream_;
  PhiloxKey key_;
  std::uint32_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned next_ = 4;
};

}  // namespace aqm

#endif  // AQM_RNG_HPP_
