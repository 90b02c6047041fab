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

#include "xpmherald/loss.h"

#include <cmath>
#include <functional>
#include <string>

#include "xpmherald/errors.h"
#include "xpmherald/rng.h"

namespace xpmh {

namespace {

constexpr ModeIndex kArmB{0};
constexpr ModeIndex kArmC{1};
constexpr int kCoarseGrid = 64;
constexpr int kFineGrid = 4096;

double click_from_mean(double mean_photons) {
    return -std::expm1(-mean_photons);
}

// Click probability when the medium multiplies the arm-B amplitude by `arm_factor`.
double branch_click(const MziConfig &cfg, Complex beta, Complex arm_factor) {
    CoherentAmplitudes amps = bs_coherent({{beta, 0.0}}, kArmB, kArmC, cfg.bs1);
    amps.values[kArmB.value] *= arm_factor;
    amps = bs_coherent(amps, kArmB, kArmC, cfg.bs2);
    return click_from_mean(std::norm(amps.values[kArmC.value]));
}

double bisect_last_positive(const std::function<double(double)> &g, double good, double bad, double tol) {
    while (bad - good > tol) {
        double mid = 0.5 * (good + bad);
        (g(mid) > 0.0 ? good : bad) = mid;
    }
    return good;
}

}  // namespace

LossParams::LossParams(double p_absorb) : p_absorb_(p_absorb), survival_(std::sqrt(1.0 - p_absorb)) {
    if (!(p_absorb >= 0.0 && p_absorb <= 1.0)) {
        throw ConfigurationError("absorption probability must lie in [0, 1], got " + std::to_string(p_absorb));
    }
}

double attenuate_mean(double n_in, const LossParams &loss) {
    if (!(n_in >= 0.0)) {
        throw ConfigurationError("mean photon number must be non-negative");
    }
    return (1.0 - loss.p_absorb()) * n_in;
}

std::vector<LossyBranch> lossy_xpm(bool signal_photon, Complex beta_arm, const LossParams &loss,
                                   const XpmParams &xpm) {
    Complex attenuated = beta_arm * loss.survival_amplitude();
    if (!signal_photon) {
        return {{1.0, 0, attenuated}};
    }
    std::vector<LossyBranch> out;
    if (loss.p_absorb() < 1.0) {
        out.push_back({1.0 - loss.p_absorb(), 1, attenuated * std::polar(1.0, xpm.phi_chi)});
    }
    if (loss.p_absorb() > 0.0) {
        out.push_back({loss.p_absorb(), 0, attenuated});
    }
    return out;
}

LossyClickProbs lossy_click_probs(const MziConfig &cfg, Complex beta, const LossParams &loss) {
    if (!is_transparent(cfg)) {
        throw ConfigurationError("lossy click probabilities require a transparent interferometer");
    }
    double u = loss.survival_amplitude();
    return {branch_click(cfg, beta, std::polar(u, cfg.xpm.phi_chi)), branch_click(cfg, beta, u)};
}

LossyHeraldReport heralded_efficiency_lossy(double p_A, const MziConfig &cfg, Complex beta, const LossParams &loss) {
    if (!(p_A > 0.0 && p_A <= 1.0)) {
        throw ConfigurationError("source efficiency must lie in (0, 1], got " + std::to_string(p_A));
    }
    auto [q1, q0] = lossy_click_probs(cfg, beta, loss);
    double pa = loss.p_absorb();
    double heralded = p_A * (1.0 - pa) * q1;
    double faulty = (p_A * pa + 1.0 - p_A) * q0;
    if (heralded + faulty <= 0.0) {
        throw ConditioningError("no click is possible; heralded efficiency undefined");
    }
    double p_prime = heralded / (heralded + faulty);
    return {q1, q0, p_prime, p_prime > p_A};
}

LossBound max_tolerable_loss(const MziConfig &cfg, Complex beta, const ImprovementCriterion &criterion, double tol) {
    if (!cfg.xpm.is_working()) {
        throw ConfigurationError("loss bound needs a working XPM (phi_chi != 2 k pi)");
    }
    if (std::abs(beta) == 0.0) {
        throw ConfigurationError("loss bound needs a non-empty coherent probe");
    }
    std::function<double(double)> g;
    if (std::holds_alternative<SmallPaLimit>(criterion)) {
        g = [&](double pa) {
            auto [q1, q0] = lossy_click_probs(cfg, beta, LossParams(pa));
            return (1.0 - pa) * q1 - q0;
        };
    } else {
        double p_A = std::get<FixedPa>(criterion).p_A;
        g = [&, p_A](double pa) {
            auto [q1, q0] = lossy_click_probs(cfg, beta, LossParams(pa));
            // p'_A - p_A, cleared of its positive denominator.
            return p_A * (1.0 - pa) * q1 * (1.0 - p_A) - p_A * (p_A * pa + 1.0 - p_A) * q0;
        };
    }

    LossBound bound;
    std::vector<double> values(kCoarseGrid + 1);
    for (int i = 0; i <= kCoarseGrid; ++i) {
        values[i] = g(static_cast<double>(i) / kCoarseGrid);
    }
    if (!(values[0] > 0.0)) {
        bound.diagnostic = "no improvement even without absorption";
        return bound;
    }
    int sign_changes = 0;
    int first_bad = -1;
    for (int i = 1; i <= kCoarseGrid; ++i) {
        if ((values[i] > 0.0) != (values[i - 1] > 0.0)) {
            ++sign_changes;
        }
        if (first_bad < 0 && !(values[i] > 0.0)) {
            first_bad = i;
        }
    }
    if (sign_changes == 0) {
        bound.p_absorb_max = 1.0;
        bound.diagnostic = "improvement persists up to total absorption";
        return bound;
    }
    if (sign_changes == 1) {
        bound.p_absorb_max =
            bisect_last_positive(g, static_cast<double>(first_bad - 1) / kCoarseGrid,
                                 static_cast<double>(first_bad) / kCoarseGrid, tol);
    } else {
        bound.monotone = false;
        bound.diagnostic = "criterion not monotone on coarse grid; used fine grid scan";
        int last_good = 0;
        for (int i = 0; i <= kFineGrid; ++i) {
            if (g(static_cast<double>(i) / kFineGrid) > 0.0) {
                last_good = i;
            }
        }
        double lo = static_cast<double>(last_good) / kFineGrid;
        bound.p_absorb_max =
            last_good == kFineGrid ? 1.0 : bisect_last_positive(g, lo, lo + 1.0 / kFineGrid, tol);
    }
    if (bound.p_absorb_max <= tol) {
        bound.p_absorb_max = 0.0;
        bound.diagnostic = "no absorption above the solver tolerance is tolerable";
    }
    return bound;
}

LossyShotEstimate sample_lossy_shots(double p_A, const MziConfig &cfg, Complex beta, const LossParams &loss,
                                     std::uint64_t n_shots, std::uint64_t seed) {
    auto [q1, q0] = lossy_click_probs(cfg, beta, loss);
    CounterRng rng(seed);
    LossyShotEstimate est{0, 0};
    for (std::uint64_t shot = 0; shot < n_shots; ++shot) {
        bool emitted = rng.uniform(shot, 0) < p_A;
        bool survived = emitted && rng.uniform(shot, 1) >= loss.p_absorb();
        bool click = rng.uniform(shot, 2) < (survived ? q1 : q0);
        if (click) {
            ++est.clicks;
            est.clicks_with_photon += survived;
        }
    }
    return est;
}

}  // namespace xpmh
