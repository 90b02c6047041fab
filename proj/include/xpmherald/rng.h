// Copyright 2026 The xpmherald Authors
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

#ifndef XPMHERALD_RNG_H
#define XPMHERALD_RNG_H

#include <cstdint>

namespace xpmh {

/// Counter-based random stream: every draw is a pure function of
/// (seed, counter, lane), so shot batches can be evaluated in any order or
/// on any number of threads and still reproduce the same aggregate.
class CounterRng {
   public:
    constexpr explicit CounterRng(std::uint64_t seed) : seed_(seed) {
    }

    constexpr std::uint64_t seed() const {
        return seed_;
    }

    /// Independent stream keyed by `stream` (e.g. one per setup in a cascade).
    constexpr CounterRng split(std::uint64_t stream) const {
        return CounterRng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL)));
    }

    constexpr std::uint64_t bits(std::uint64_t counter, std::uint32_t lane) const {
        return mix(mix(seed_ + 0x9e3779b97f4a7c15ULL * (counter + 1)) ^ (0xd1b54a32d192ed03ULL * (lane + 1)));
    }

    /// Uniform double in (0, 1); never returns exactly zero, so a draw
    /// `u < p` with p == 0 can never succeed.
    constexpr double uniform(std::uint64_t counter, std::uint32_t lane) const {
        return (static_cast<double>(bits(counter, lane) >> 11) + 0.5) * 0x1.0p-53;
    }

   private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace xpmh

#endif
