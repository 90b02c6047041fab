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

#include "xpmherald/cascade.h"

#include <cmath>
#include <numbers>
#include <string>

#include "xpmherald/errors.h"
#include "xpmherald/mzi.h"
#include "xpmherald/rng.h"

namespace xpmh {

namespace {

using std::numbers::pi;

struct Trig {
    double sin2;  // sin^2(phi_chi / 2)
    double cos2;  // cos^2(phi_chi / 2)
};

Trig half_angle(double phi_chi) {
    double s = std::sin(phi_chi / 2);
    double c = std::cos(phi_chi / 2);
    return {s * s, c * c};
}

// sum_{i=0}^{k-1} cos^{2i} as (cos^{2k} - 1) / (cos^2 - 1); expm1/log1p form
// for cos^2 near 1.
double geometric(const Trig &t, std::uint32_t k) {
    if (k == 0) {
        return 0.0;
    }
    if (t.sin2 == 0.0) {
        return k;
    }
    if (t.cos2 <= 0.5) {
        return (1.0 - std::pow(t.cos2, k)) / t.sin2;
    }
    return std::expm1(k * std::log1p(-t.sin2)) / -t.sin2;
}

double power(double base, std::uint32_t k) {
    return k == 0 ? 1.0 : std::pow(base, k);
}

double binomial_pmf(std::uint32_t n, std::uint32_t k, double p) {
    if (p == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    if (p == 1.0) {
        return k == n ? 1.0 : 0.0;
    }
    double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(log_choose + k * std::log(p) + (n - k) * std::log1p(-p));
}

double click_from_mean(double mean_photons) {
    return -std::expm1(-mean_photons);
}

MziConfig stage_config(double phi_chi) {
    return MziConfig::sum_constrained(pi / 4, 0.0, phi_chi);
}

// One setup of the optics: returns (click probability, B amplitude if no click).
struct StageOutcome {
    double p_click;
    Complex next;
};

StageOutcome run_stage(const MziConfig &cfg, bool photon, Complex alpha) {
    CoherentAmplitudes out = propagate_coherent(cfg, photon, alpha);
    return {click_from_mean(std::norm(out.values[1])), out.values[0]};
}

void require_n(std::uint32_t n) {
    if (n < 1) {
        throw ConfigurationError("setup index starts at 1");
    }
}

}  // namespace

void CascadeConfig::validate() const {
    if (n_setups < 1) {
        throw ConfigurationError("a cascade needs at least one setup");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigurationError("source efficiency must lie in [0, 1], got " + std::to_string(p));
    }
}

double scheme1_pn(std::uint32_t n, Complex alpha, double phi_chi) {
    require_n(n);
    Trig t = half_angle(phi_chi);
    double mean = std::norm(alpha) * t.sin2;
    double survive = std::exp(-mean * geometric(t, n - 1));
    return survive * click_from_mean(mean * power(t.cos2, n - 1));
}

double scheme1_total(std::uint32_t n_setups, Complex alpha, double phi_chi, double p) {
    double sum = 0.0;
    for (std::uint32_t n = 1; n <= n_setups; ++n) {
        sum += scheme1_pn(n, alpha, phi_chi);
    }
    return p * sum;
}

double scheme2_pn(std::uint32_t n, Complex alpha, double phi_chi, double p) {
    require_n(n);
    Trig t = half_angle(phi_chi);
    double mean = std::norm(alpha) * t.sin2;
    double sum = 0.0;
    for (std::uint32_t k = 0; k < n; ++k) {
        double pattern = binomial_pmf(n - 1, k, p);
        if (pattern == 0.0) {
            continue;
        }
        sum += pattern * std::exp(-mean * geometric(t, k)) * p * click_from_mean(mean * power(t.cos2, k));
    }
    return sum;
}

double scheme2_total(std::uint32_t n_setups, Complex alpha, double phi_chi, double p) {
    double sum = 0.0;
    for (std::uint32_t n = 1; n <= n_setups; ++n) {
        sum += scheme2_pn(n, alpha, phi_chi, p);
    }
    return sum;
}

CascadeResult evaluate_cascade(const CascadeConfig &cfg) {
    cfg.validate();
    CascadeResult r;
    for (std::uint32_t n = 1; n <= cfg.n_setups; ++n) {
        r.per_setup.push_back(cfg.scheme == CascadeScheme::kReuseCoherent ? scheme1_pn(n, cfg.alpha, cfg.phi_chi)
                                                                          : scheme2_pn(n, cfg.alpha, cfg.phi_chi, cfg.p));
    }
    double sum = 0.0;
    for (double v : r.per_setup) {
        sum += v;
    }
    r.total = cfg.scheme == CascadeScheme::kReuseCoherent ? cfg.p * sum : sum;
    r.residual_amp = std::abs(cfg.alpha) * std::pow(std::abs(std::cos(cfg.phi_chi / 2)), cfg.n_setups);
    return r;
}

namespace {

CascadeResult exact_reuse(const CascadeConfig &cfg) {
    const MziConfig stage = stage_config(cfg.phi_chi);
    CascadeResult r;
    Complex alpha = cfg.alpha;
    double no_click_so_far = 1.0;
    double sum = 0.0;
    for (std::uint32_t n = 1; n <= cfg.n_setups; ++n) {
        StageOutcome s = run_stage(stage, true, alpha);
        r.per_setup.push_back(no_click_so_far * s.p_click);
        sum += r.per_setup.back();
        no_click_so_far *= 1.0 - s.p_click;
        alpha = s.next;
    }
    r.total = cfg.p * sum;
    r.residual_amp = std::abs(alpha);
    return r;
}

CascadeResult exact_many_sources(const CascadeConfig &cfg) {
    if (cfg.n_setups > kMaxEnumeratedSetups) {
        throw ConfigurationError("exact scheme-2 enumeration is capped at " + std::to_string(kMaxEnumeratedSetups) +
                                 " setups, got " + std::to_string(cfg.n_setups));
    }
    const MziConfig stage = stage_config(cfg.phi_chi);
    CascadeResult r;
    r.per_setup.assign(cfg.n_setups, 0.0);
    // Depth-first walk over occupancy patterns; each node carries the
    // probability of reaching it without a click and the current amplitude.
    struct Node {
        std::uint32_t setup;
        double weight;
        Complex alpha;
    };
    std::vector<Node> stack{{0, 1.0, cfg.alpha}};
    while (!stack.empty()) {
        Node node = stack.back();
        stack.pop_back();
        if (node.setup == cfg.n_setups || node.weight == 0.0) {
            continue;
        }
        StageOutcome with_photon = run_stage(stage, true, node.alpha);
        r.per_setup[node.setup] += node.weight * cfg.p * with_photon.p_click;
        stack.push_back({node.setup + 1, node.weight * cfg.p * (1.0 - with_photon.p_click), with_photon.next});
        StageOutcome empty = run_stage(stage, false, node.alpha);
        stack.push_back({node.setup + 1, node.weight * (1.0 - cfg.p) * (1.0 - empty.p_click), empty.next});
    }
    for (double v : r.per_setup) {
        r.total += v;
    }
    Complex alpha = cfg.alpha;
    for (std::uint32_t n = 0; n < cfg.n_setups; ++n) {
        alpha = run_stage(stage, true, alpha).next;
    }
    r.residual_amp = std::abs(alpha);
    return r;
}

CascadeResult monte_carlo(const CascadeConfig &cfg, const MonteCarloCascade &mc) {
    if (mc.shots == 0) {
        throw ConfigurationError("Monte Carlo cascade needs at least one shot");
    }
    const MziConfig stage = stage_config(cfg.phi_chi);
    const CounterRng rng(mc.seed);
    const bool reuse = cfg.scheme == CascadeScheme::kReuseCoherent;
    std::vector<std::uint64_t> first_click(cfg.n_setups, 0);
    std::uint64_t photon_shots = 0;
    for (std::uint64_t shot = 0; shot < mc.shots; ++shot) {
        bool photon = reuse && rng.uniform(shot, 0) < cfg.p;
        if (reuse && !photon) {
            continue;
        }
        ++photon_shots;
        Complex alpha = cfg.alpha;
        for (std::uint32_t n = 0; n < cfg.n_setups; ++n) {
            if (!reuse) {
                photon = rng.uniform(shot, 2 * n + 1) < cfg.p;
            }
            StageOutcome s = run_stage(stage, photon, alpha);
            if (rng.uniform(shot, 2 * n + 2) < s.p_click) {
                ++first_click[n];
                break;
            }
            alpha = s.next;
        }
    }
    CascadeResult r;
    // Scheme 1 reports p_n conditioned on the photon, scheme 2 per shot.
    double denom = static_cast<double>(reuse ? photon_shots : mc.shots);
    std::uint64_t clicks = 0;
    for (auto count : first_click) {
        r.per_setup.push_back(denom == 0.0 ? 0.0 : static_cast<double>(count) / denom);
        clicks += count;
    }
    r.total = static_cast<double>(clicks) / static_cast<double>(mc.shots);
    r.residual_amp = std::abs(cfg.alpha) * std::pow(std::abs(std::cos(cfg.phi_chi / 2)), cfg.n_setups);
    return r;
}

}  // namespace

CascadeResult simulate_cascade(const CascadeConfig &cfg, const CascadeMode &mode) {
    cfg.validate();
    if (const auto *mc = std::get_if<MonteCarloCascade>(&mode)) {
        return monte_carlo(cfg, *mc);
    }
    return cfg.scheme == CascadeScheme::kReuseCoherent ? exact_reuse(cfg) : exact_many_sources(cfg);
}

}  // namespace xpmh
