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

#ifndef XPMHERALD_LOSS_H
#define XPMHERALD_LOSS_H

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "xpmherald/mzi.h"

namespace xpmh {

/// Absorption in the XPM medium: each photon is lost with probability
/// `p_absorb`, so a coherent amplitude shrinks by sqrt(1 - p_absorb).
class LossParams {
   public:
    /// Throws ConfigurationError unless 0 <= p_absorb <= 1.
    explicit LossParams(double p_absorb);

    double p_absorb() const {
        return p_absorb_;
    }
    double survival_amplitude() const {
        return survival_;
    }

   private:
    double p_absorb_;
    double survival_;
};

/// Mean photon number leaving the medium: (1 - p_absorb) n_in.
double attenuate_mean(double n_in, const LossParams &loss);

/// One outcome of the lossy XPM map: definite photon number in A and a
/// coherent amplitude in B.
struct LossyBranch {
    double weight;
    std::uint32_t signal_photons;
    Complex probe_amplitude;
};

/// Lossy XPM acting on |n>_A |beta>_B with n in {0, 1}. Either the photon
/// survives and imprints the full phase, or it is absorbed and imprints none;
/// B is attenuated in every branch. Zero-weight branches are omitted.
std::vector<LossyBranch> lossy_xpm(bool signal_photon, Complex beta_arm, const LossParams &loss,
                                   const XpmParams &xpm);

struct LossyClickProbs {
    double q1;  // photon survived, phase imparted
    double q0;  // photon absorbed, or no photon at all
};

/// Click probabilities of the two lossy branches, propagated on the classical
/// path (the C arm is lossless). Throws ConfigurationError unless transparent.
LossyClickProbs lossy_click_probs(const MziConfig &cfg, Complex beta, const LossParams &loss);

struct LossyHeraldReport {
    double q1;
    double q0;
    double p_prime_A;
    bool improvement;
};

/// Heralded efficiency under loss,
///   p'_A = p_A (1-pa) q1 / [p_A (1-pa) q1 + (p_A pa + 1 - p_A) q0].
/// Throws ConditioningError when no click is possible.
LossyHeraldReport heralded_efficiency_lossy(double p_A, const MziConfig &cfg, Complex beta, const LossParams &loss);

/// p_A -> 0 reduction of the improvement condition: (1-pa) q1 > q0.
struct SmallPaLimit {};
/// p'_A > p_A at a fixed source efficiency.
struct FixedPa {
    double p_A;
};
using ImprovementCriterion = std::variant<SmallPaLimit, FixedPa>;

struct LossBound {
    double p_absorb_max = 0.0;
    /// The criterion changed sign once on the coarse grid, so plain bisection was used.
    bool monotone = true;
    std::string diagnostic;
};

/// Largest absorption probability for which the scheme still improves the
/// source, to within `tol`. Returns 0 with a diagnostic when no positive
/// absorption is tolerable.
LossBound max_tolerable_loss(const MziConfig &cfg, Complex beta, const ImprovementCriterion &criterion,
                             double tol = 1e-6);

/// Sequential Monte Carlo over the lossy branch model; returns the fraction
/// of clicks that herald a surviving photon.
struct LossyShotEstimate {
    std::uint64_t clicks;
    std::uint64_t clicks_with_photon;
    double p_prime_A() const {
        return clicks == 0 ? 0.0 : static_cast<double>(clicks_with_photon) / static_cast<double>(clicks);
    }
};

LossyShotEstimate sample_lossy_shots(double p_A, const MziConfig &cfg, Complex beta, const LossParams &loss,
                                     std::uint64_t n_shots, std::uint64_t seed);

}  // namespace xpmh

#endif
