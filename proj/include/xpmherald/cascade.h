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

#ifndef XPMHERALD_CASCADE_H
#define XPMHERALD_CASCADE_H

#include <cstdint>
#include <variant>
#include <vector>

#include "xpmherald/fock.h"

namespace xpmh {

/// Chained heralding setups sharing one coherent probe. Every setup uses the
/// balanced transparent interferometer (theta1 = pi/4).
enum class CascadeScheme {
    /// One noisy photon retried against the coherent state leaving each setup.
    kReuseCoherent,
    /// A fresh noisy photon at every setup, one coherent state for all of them.
    kManySources,
};

struct CascadeConfig {
    CascadeScheme scheme = CascadeScheme::kReuseCoherent;
    std::uint32_t n_setups = 1;
    /// Coherent amplitude entering the first setup (called beta elsewhere).
    Complex alpha;
    double phi_chi = 0.0;
    /// Efficiency of the noisy source(s).
    double p = 1.0;

    void validate() const;
};

struct CascadeResult {
    /// p_n: probability that the first click happens in setup n (index n-1).
    /// For kReuseCoherent this is conditioned on the photon being present.
    std::vector<double> per_setup;
    /// Probability that some setup heralds a photon, P_T.
    double total = 0.0;
    /// |alpha| after all setups along the path where every setup carried a
    /// photon and none clicked.
    double residual_amp = 0.0;
};

double scheme1_pn(std::uint32_t n, Complex alpha, double phi_chi);
double scheme1_total(std::uint32_t n_setups, Complex alpha, double phi_chi, double p);
double scheme2_pn(std::uint32_t n, Complex alpha, double phi_chi, double p);
double scheme2_total(std::uint32_t n_setups, Complex alpha, double phi_chi, double p);

/// Sequential simulation: scheme 1 by amplitude recursion, scheme 2 by
/// enumerating every photon-occupancy pattern of the earlier setups.
struct ExactCascade {};
struct MonteCarloCascade {
    std::uint64_t seed;
    std::uint64_t shots;
};
using CascadeMode = std::variant<ExactCascade, MonteCarloCascade>;

/// Largest scheme-2 cascade the exact enumeration accepts (2^(N-1) patterns).
inline constexpr std::uint32_t kMaxEnumeratedSetups = 22;

/// Oracle for the closed forms: tracks the coherent amplitude through the
/// optics of each setup. Throws ConfigurationError when the scheme-2
/// enumeration would exceed kMaxEnumeratedSetups.
CascadeResult simulate_cascade(const CascadeConfig &cfg, const CascadeMode &mode);

/// Closed-form counterpart of `simulate_cascade`.
CascadeResult evaluate_cascade(const CascadeConfig &cfg);

}  // namespace xpmh

#endif
