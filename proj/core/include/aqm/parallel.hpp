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

#ifndef AQM_PARALLEL_HPP_
#define AQM_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace aqm {

/// Worker threads used for event loops: the hardware concurrency, capped by
/// the AQM_THREADS environment variable when it is set to a positive integer.
unsigned worker_count();

/// Splits [0, n) into fixed-size blocks of `grain` indices and calls
/// body(block, begin, end) once per block, possibly concurrently. Block
/// boundaries depend only on n and grain, never on the thread count, so a
/// caller that reduces per-block results in block order gets bit-identical
/// output for any AQM_THREADS.
void for_each_block(
    std::size_t n, std::size_t grain,
    const std::function<void(std::size_t block, std::size_t begin,
                             std::size_t end)>& body);

inline std::size_t block_count(std::size_t n, std::size_t grain) {
  return (n + grain - 1) / grain;
}

}  // namespace aqm

#endif  // AQM_PARALLEL_HPP_
