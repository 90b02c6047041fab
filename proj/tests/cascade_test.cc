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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "xpmherald/errors.h"
#include "xpmherald/mzi.h"
#include "xpmherald/optics.h"

using namespace xpmh;
using std::numbers::pi;

namespace {

CascadeConfig make(CascadeScheme scheme, std::uint32_t n, double mean, double phi_chi, double p) {
    return {scheme, n, Complex(std::sqrt(mean), 0.0), phi_chi, p};
}

// Oracle: scheme-2 first-click probability by explicit enumeration of the
// 2^(n-1) occupancy bitmasks, with the amplitude shrinking by |cos(phi/2)|
// at every occupied, silent setup.
double enumerated_scheme2_pn(std::uint32_t n, double mean, double phi_chi, double p) {
    double c2 = std::pow(std::cos(phi_chi / 2), 2);
    double s2 = 1.0 - c2;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
        double weight = 1.0;
        double m = mean;
        for (std::uint32_t j = 0; j + 1 < n; ++j) {
            if (mask >> j & 1) {
                weight *= p * std::exp(-m * s2);
                m *= c2;
            } else {
                weight *= 1.0 - p;
            }
        }
        total += weight * p * (1.0 - std::exp(-m * s2));
    }
    return total;
}

}  // namespace

TEST(cascade, two_setups_at_pi_second_never_clicks) {
    for (double mean : {0.5, 2.0, 9.0}) {
        EXPECT_NEAR(scheme1_pn(2, Complex(std::sqrt(mean), 0.0), pi), 0.0, 1e-15);
        auto r = simulate_cascade(make(CascadeScheme::kReuseCoherent, 2, mean, pi, 1.0), ExactCascade{});
        EXPECT_NEAR(r.per_setup[1], 0.0, 1e-15);
        EXPECT_NEAR(r.residual_amp, 0.0, 1e-12);
    }
}

TEST(cascade, scheme1_saturates_at_source_efficiency) {
    auto cfg = make(CascadeScheme::kReuseCoherent, 50, 25.0, pi / 2, 0.6);
    EXPECT_NEAR(scheme1_total(50, cfg.alpha, cfg.phi_chi, cfg.p), 0.6, 1e-6);
    EXPECT_NEAR(simulate_cascade(cfg, ExactCascade{}).total, 0.6, 1e-6);
}

TEST(cascade, scheme2_reaches_near_certainty) {
    Complex alpha(std::sqrt(25.0), 0.0);
    EXPECT_GE(scheme2_total(100, alpha, pi / 2, 0.3), 0.999);
    EXPECT_LE(scheme2_total(100, alpha, pi / 2, 0.3), 1.0 + 1e-12);
}

TEST(cascade, scheme2_closed_form_matches_enumeration) {
    for (double phi : {pi, pi / 2, 0.3, 0.01}) {
        for (double p : {0.0, 0.3, 0.75, 1.0}) {
            for (double mean : {0.4, 4.0}) {
                auto cfg = make(CascadeScheme::kManySources, 12, mean, phi, p);
                auto sim = simulate_cascade(cfg, ExactCascade{});
                auto closed = evaluate_cascade(cfg);
                for (std::uint32_t n = 1; n <= 12; ++n) {
                    double oracle = enumerated_scheme2_pn(n, mean, phi, p);
                    EXPECT_NEAR(closed.per_setup[n - 1], oracle, 1e-12) << n << " " << phi << " " << p;
                    EXPECT_NEAR(sim.per_setup[n - 1], oracle, 1e-12) << n << " " << phi << " " << p;
                }
                EXPECT_NEAR(sim.total, closed.total, 1e-12);
                EXPECT_NEAR(sim.residual_amp, closed.residual_amp, 1e-12);
            }
        }
    }
}

TEST(cascade, scheme1_closed_form_matches_recursion) {
    for (double phi : {pi, 2.0, pi / 2, 0.05}) {
        for (double mean : {0.3, 3.0, 30.0}) {
            auto cfg = make(CascadeScheme::kReuseCoherent, 100, mean, phi, 0.8);
            auto sim = simulate_cascade(cfg, ExactCascade{});
            auto closed = evaluate_cascade(cfg);
            for (std::uint32_t n = 0; n < 100; ++n) {
                EXPECT_NEAR(sim.per_setup[n], closed.per_setup[n], 1e-12);
            }
            EXPECT_NEAR(sim.total, closed.total, 1e-12);
            EXPECT_NEAR(sim.residual_amp, closed.residual_amp, 1e-12);
        }
    }
}

TEST(cascade, full_efficiency_scheme2_equals_scheme1) {
    Complex alpha(1.7, -0.4);
    for (double phi : {pi, 1.1, 0.2}) {
        for (std::uint32_t n = 1; n <= 30; ++n) {
            EXPECT_NEAR(scheme2_pn(n, alpha, phi, 1.0), scheme1_pn(n, alpha, phi), 1e-14);
        }
        EXPECT_NEAR(scheme2_total(30, alpha, phi, 1.0), scheme1_total(30, alpha, phi, 1.0), 1e-13);
    }
}

TEST(cascade, scheme1_total_scales_with_efficiency) {
    Complex alpha(2.0, 0.0);
    double full = scheme1_total(10, alpha, 0.7, 1.0);
    for (double p : {0.0, 0.25, 0.9}) {
        EXPECT_NEAR(scheme1_total(10, alpha, 0.7, p), p * full, 1e-15);
    }
}

TEST(cascade, outgoing_probe_follows_beam_splitter_chain) {
    auto cfg = MziConfig::sum_constrained(pi / 4, 0.0, 1.3);
    Complex beta(0.9, 0.6);
    // BS1 on (B, C), conditional phase on B, BS2 on (B, C).
    auto mid = bs_coherent({{beta, 0.0}}, ModeIndex{0}, ModeIndex{1}, cfg.bs1);
    mid.values[0] *= std::polar(1.0, cfg.xpm.phi_chi);
    auto out = bs_coherent(mid, ModeIndex{0}, ModeIndex{1}, cfg.bs2);
    auto got = propagate_coherent(cfg, true, beta);
    EXPECT_LT(std::abs(got.values[0] - out.values[0]), 1e-14);
    EXPECT_LT(std::abs(got.values[1] - out.values[1]), 1e-14);
    EXPECT_NEAR(std::abs(got.values[0]), std::abs(beta) * std::abs(std::cos(0.65)), 1e-14);
    EXPECT_NEAR(std::norm(got.values[1]), std::norm(beta) * std::pow(std::sin(0.65), 2), 1e-14);
}

TEST(cascade, probabilities_form_subdistribution) {
    for (auto scheme : {CascadeScheme::kReuseCoherent, CascadeScheme::kManySources}) {
        auto r = evaluate_cascade(make(scheme, 80, 6.0, 0.4, 0.5));
        double sum = 0.0;
        for (double v : r.per_setup) {
            EXPECT_GE(v, 0.0);
            sum += v;
        }
        EXPECT_LE(sum, 1.0 + 1e-12);
    }
}

TEST(cascade, small_phase_is_numerically_stable) {
    Complex alpha(10.0, 0.0);
    double phi = 1e-7;
    double mean = 100.0 * std::pow(std::sin(phi / 2), 2);
    // For tiny phases the first-click terms approach mean * exp(-mean (n-1)).
    EXPECT_NEAR(scheme1_pn(3, alpha, phi) / (mean * std::exp(-2 * mean)), 1.0, 1e-6);
    EXPECT_NEAR(scheme2_pn(3, alpha, phi, 0.5) / (0.5 * mean), 1.0, 1e-6);
}

TEST(cascade, monte_carlo_matches_closed_form) {
    const std::uint64_t shots = 200000;
    for (auto scheme : {CascadeScheme::kReuseCoherent, CascadeScheme::kManySources}) {
        auto cfg = make(scheme, 6, 1.5, pi / 2, 0.6);
        auto mc = simulate_cascade(cfg, MonteCarloCascade{11, shots});
        auto closed = evaluate_cascade(cfg);
        double sigma = std::sqrt(closed.total * (1 - closed.total) / shots);
        EXPECT_NEAR(mc.total, closed.total, 4 * sigma);
        double denom = scheme == CascadeScheme::kReuseCoherent ? shots * cfg.p : shots;
        for (std::size_t n = 0; n < closed.per_setup.size(); ++n) {
            double q = closed.per_setup[n];
            EXPECT_NEAR(mc.per_setup[n], q, 4 * std::sqrt(q * (1 - q) / denom) + 1e-4);
        }
    }
}

TEST(cascade, monte_carlo_is_deterministic_in_seed) {
    auto cfg = make(CascadeScheme::kManySources, 5, 2.0, 1.0, 0.4);
    auto a = simulate_cascade(cfg, MonteCarloCascade{5, 20000});
    auto b = simulate_cascade(cfg, MonteCarloCascade{5, 20000});
    auto c = simulate_cascade(cfg, MonteCarloCascade{6, 20000});
    EXPECT_EQ(a.per_setup, b.per_setup);
    EXPECT_NE(a.per_setup, c.per_setup);
}

TEST(cascade, rejects_bad_configurations) {
    EXPECT_THROW(evaluate_cascade(make(CascadeScheme::kReuseCoherent, 0, 1.0, pi, 0.5)), ConfigurationError);
    EXPECT_THROW(evaluate_cascade(make(CascadeScheme::kReuseCoherent, 3, 1.0, pi, 1.5)), ConfigurationError);
    EXPECT_THROW(simulate_cascade(make(CascadeScheme::kManySources, kMaxEnumeratedSetups + 1, 1.0, pi, 0.5),
                                  ExactCascade{}),
                 ConfigurationError);
    EXPECT_THROW(simulate_cascade(make(CascadeScheme::kManySources, 3, 1.0, pi, 0.5), MonteCarloCascade{1, 0}),
                 ConfigurationError);
    EXPECT_THROW(scheme1_pn(0, Complex(1.0, 0.0), pi), ConfigurationError);
}
