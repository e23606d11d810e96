// Copyright 2026 The qbench Authors
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

#ifndef QBENCH_CORE_RNG_H
#define QBENCH_CORE_RNG_H

#include <cstdint>
#include <string_view>

namespace qbench {

/// Counter-based generator: stream `k` of seed `s` is a SplitMix64 sequence
/// started from mix(s, k). Shot k of a run always reads stream k, so shots
/// can be evaluated in any order and still reproduce the same outcomes.
class Rng {
   public:
    static constexpr std::string_view kAlgorithm = "splitmix64-ctr/1";

    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }

   private:
    std::uint64_t state_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace qbench

#endif
