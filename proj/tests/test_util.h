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

#ifndef XPMHERALD_TESTS_TEST_UTIL_H
#define XPMHERALD_TESTS_TEST_UTIL_H

#include <cmath>
#include <complex>
#include <random>

#include "xpmherald/fock.h"

namespace xpmh::testutil {

inline Complex random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

/// Random normalized ket on a register with the given cutoffs, supported on
/// tuples whose total photon number is at most `max_total`.
inline MultiModeKet random_ket(std::mt19937_64 &rng, const Cutoffs &cutoffs, std::uint32_t max_total) {
    MultiModeKet ket(cutoffs);
    Occupation occ(cutoffs.size(), 0);
    // Odometer over all tuples under the cutoffs.
    while (true) {
        std::uint32_t total = 0;
        for (auto n : occ) {
            total += n;
        }
        if (total <= max_total) {
            ket.add(occ, random_complex(rng));
        }
        std::size_t m = 0;
        while (m < occ.size() && occ[m] == cutoffs[m]) {
            occ[m++] = 0;
        }
        if (m == occ.size()) {
            break;
        }
        ++occ[m];
    }
    return ket.scaled(1.0 / std::sqrt(ket.norm2()));
}

/// Direct coherent-state amplitude e^{-|beta|^2/2} beta^n / sqrt(n!).
inline Complex coherent_amplitude(Complex beta, unsigned n) {
    Complex value = std::exp(-0.5 * std::norm(beta));
    for (unsigned k = 1; k <= n; ++k) {
        value *= beta / std::sqrt(static_cast<double>(k));
    }
    return value;
}

}  // namespace xpmh::testutil

#endif
