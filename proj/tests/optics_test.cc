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

#include "xpmherald/optics.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.h"
#include "xpmherald/errors.h"

using namespace xpmh;
using std::numbers::pi;

namespace {

double factorial(unsigned n) {
    return std::tgamma(n + 1.0);
}

double binom(unsigned n, unsigned k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

// Oracle: expand (c x + e^{-i phi} s y)^n (-e^{i phi} s x + c y)^m binomially,
// with x, y the output creation operators, and normalize by sqrt factorials.
MultiModeKet bs_by_expansion(const MultiModeKet &ket, const BeamSplitterParams &p) {
    double c = std::cos(p.theta), s = std::sin(p.theta);
    Complex ex = std::polar(1.0, -p.phi);
    MultiModeKet out(ket.cutoffs());
    for (const auto &[occ, amp] : ket.terms()) {
        unsigned n = occ[0], m = occ[1];
        for (unsigned a = 0; a <= n; ++a) {
            for (unsigned b = 0; b <= m; ++b) {
                // a x's from the first factor, b x's from the second.
                Complex coef = binom(n, a) * std::pow(c, a) * std::pow(ex * s, n - a) * binom(m, b) *
                               std::pow(-std::conj(ex) * s, b) * std::pow(c, m - b);
                unsigned kx = a + b, ky = n + m - kx;
                double norm = std::sqrt(factorial(kx) * factorial(ky) / (factorial(n) * factorial(m)));
                out.add({kx, ky}, amp * coef * norm);
            }
        }
    }
    return out;
}

}  // namespace

TEST(optics, beam_splitter_single_photon_balanced) {
    auto out = apply_beam_splitter(make_fock({1, 0}, {1, 1}), ModeIndex{0}, ModeIndex{1}, {pi / 4, 0.0});
    EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({0, 1}) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(optics, beam_splitter_identity) {
    std::mt19937_64 rng(1);
    auto ket = testutil::random_ket(rng, {2, 3}, 5);
    auto out = apply_beam_splitter(ket, ModeIndex{0}, ModeIndex{1}, {0.0, 1.3});
    EXPECT_EQ(max_amplitude_distance(out, ket), 0.0);
}

TEST(optics, hong_ou_mandel) {
    auto out = apply_beam_splitter(make_fock({1, 1}, {2, 2}), ModeIndex{0}, ModeIndex{1}, {pi / 4, 0.0});
    EXPECT_NEAR(std::abs(out.amplitude({0, 2}) - 1 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({2, 0}) + 1 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({1, 1})), 0.0, 1e-15);
}

TEST(optics, beam_splitter_matches_polynomial_expansion) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int trial = 0; trial < 40; ++trial) {
        auto ket = testutil::random_ket(rng, {6, 6}, 6);
        BeamSplitterParams p{angle(rng), angle(rng)};
        auto fast = apply_beam_splitter(ket, ModeIndex{0}, ModeIndex{1}, p);
        auto slow = bs_by_expansion(ket, p);
        EXPECT_LT(max_amplitude_distance(fast, slow), 1e-12);
        EXPECT_NEAR(fast.norm2(), 1.0, 1e-12);
    }
}

TEST(optics, beam_splitter_block_is_unitary_at_high_photon_number) {
    auto block = beam_splitter_block({0.83, 2.1}, 100);
    for (std::size_t i = 0; i < block.size(); ++i) {
        for (std::size_t j = 0; j < block.size(); ++j) {
            Complex dot{};
            for (std::size_t k = 0; k < block.size(); ++k) dot += std::conj(block[k][i]) * block[k][j];
            EXPECT_NEAR(std::abs(dot - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
        }
    }
}

TEST(optics, beam_splitter_inverse_restores) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int trial = 0; trial < 40; ++trial) {
        auto ket = testutil::random_ket(rng, {4, 4, 1}, 4);
        BeamSplitterParams p{angle(rng), angle(rng)};
        auto there = apply_beam_splitter(ket, ModeIndex{0}, ModeIndex{1}, p);
        auto back = apply_beam_splitter(there, ModeIndex{0}, ModeIndex{1}, p.inverse());
        EXPECT_LT(max_amplitude_distance(back, ket), 1e-12);
        auto product = multiply(beam_splitter_matrix(p.inverse()), beam_splitter_matrix(p));
        EXPECT_NEAR(std::abs(product[0][0] - 1.0) + std::abs(product[0][1]), 0.0, 1e-15);
    }
}

TEST(optics, beam_splitter_cutoff_violation) {
    EXPECT_THROW(apply_beam_splitter(make_fock({1, 1}, {1, 1}), ModeIndex{0}, ModeIndex{1}, {pi / 4, 0.0}),
                 CutoffError);
    EXPECT_THROW(apply_beam_splitter(make_fock({1, 0}, {1, 1}), ModeIndex{0}, ModeIndex{0}, {pi / 4, 0.0}),
                 ModeMismatchError);
    // A full swap needs no extra room; rounding of cos(pi/2) must not trip the check.
    auto swapped = apply_beam_splitter(make_fock({2, 0}, {2, 2}), ModeIndex{0}, ModeIndex{1}, {pi / 2, 0.0});
    EXPECT_NEAR(std::abs(swapped.amplitude({0, 2})), 1.0, 1e-15);
}

TEST(optics, xpm_examples) {
    double phi = 0.37;
    auto one = apply_xpm(make_fock({1, 1}, {1, 1}), ModeIndex{0}, ModeIndex{1}, {phi});
    EXPECT_NEAR(std::abs(one.amplitude({1, 1}) - std::polar(1.0, phi)), 0.0, 1e-15);

    auto empty = apply_xpm(make_fock({0, 5}, {1, 5}), ModeIndex{0}, ModeIndex{1}, {phi});
    EXPECT_EQ(empty.amplitude({0, 5}), Complex(1.0));

    auto six = apply_xpm(make_fock({2, 3}, {2, 3}), ModeIndex{0}, ModeIndex{1}, {pi / 6});
    EXPECT_NEAR(std::abs(six.amplitude({2, 3}) + 1.0), 0.0, 1e-15);
}

TEST(optics, xpm_preserves_number_distributions) {
    std::mt19937_64 rng(4);
    auto ket = testutil::random_ket(rng, {3, 3, 2}, 6);
    auto out = apply_xpm(ket, ModeIndex{0}, ModeIndex{1}, {1.234});
    for (std::size_t m = 0; m < 3; ++m) {
        auto before = mode_number_distribution(ket, ModeIndex{m});
        auto after = mode_number_distribution(out, ModeIndex{m});
        for (std::size_t n = 0; n < before.size(); ++n) EXPECT_NEAR(before[n], after[n], 1e-15);
    }
    EXPECT_NEAR(out.norm2(), ket.norm2(), 1e-14);
}

TEST(optics, xpm_working_flag) {
    EXPECT_FALSE(XpmParams{0.0}.is_working());
    EXPECT_FALSE(XpmParams{4 * pi}.is_working());
    EXPECT_FALSE(XpmParams{-2 * pi + 1e-12}.is_working());
    EXPECT_TRUE(XpmParams{pi}.is_working());
    EXPECT_TRUE(XpmParams{0.01}.is_working());
}

TEST(optics, bs_coherent_examples) {
    Complex beta{1.3, -0.4};
    double t = 0.7, f = 1.1;
    auto out = bs_coherent({{beta, 0.0}}, ModeIndex{0}, ModeIndex{1}, {t, f});
    EXPECT_NEAR(std::abs(out.values[0] - beta * std::cos(t)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.values[1] - beta * std::polar(std::sin(t), -f)), 0.0, 1e-15);

    auto same = bs_coherent({{beta, 0.0}}, ModeIndex{0}, ModeIndex{1}, {0.0, f});
    EXPECT_EQ(same.values[0], beta);
    EXPECT_EQ(same.values[1], Complex(0.0));
}

TEST(optics, bs_coherent_conserves_mean_photon_number) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int trial = 0; trial < 100; ++trial) {
        CoherentAmplitudes a{{testutil::random_complex(rng), testutil::random_complex(rng)}};
        auto out = bs_coherent(a, ModeIndex{0}, ModeIndex{1}, {angle(rng), angle(rng)});
        EXPECT_NEAR(out.mean_photon_number(), a.mean_photon_number(), 1e-12);
    }
}

TEST(optics, xpm_coherent_branch_examples) {
    Complex beta{0.4, 0.9};
    auto flipped = xpm_coherent_branch({{beta}}, ModeIndex{0}, true, {pi});
    EXPECT_NEAR(std::abs(flipped.values[0] + beta), 0.0, 1e-15);
    auto kept = xpm_coherent_branch({{beta}}, ModeIndex{0}, false, {pi});
    EXPECT_EQ(kept.values[0], beta);
}

TEST(optics, classical_path_matches_exact_path) {
    // |1>_A |beta>_B |0>_C through BS, XPM, BS; compare with the product of
    // coherent states predicted by the amplitude path.
    double eps = 1e-12;
    for (double mag : {0.3, 1.0, 2.0, 4.0}) {
        Complex beta = std::polar(mag, 0.4);
        BeamSplitterParams bs1{0.6, 0.3}, bs2{1.1, -0.8};
        XpmParams xpm{2.2};
        auto probe = make_coherent(beta, TruncationPolicy::automatic(eps));
        std::uint32_t cap = probe.cutoffs()[0];
        auto ket = tensor(std::vector{make_fock({1}, {1}), probe.with_cutoffs({cap}), make_vacuum({cap})});
        ket = apply_beam_splitter(ket, ModeIndex{1}, ModeIndex{2}, bs1);
        ket = apply_xpm(ket, ModeIndex{0}, ModeIndex{1}, xpm);
        ket = apply_beam_splitter(ket, ModeIndex{1}, ModeIndex{2}, bs2);

        CoherentAmplitudes amps{{beta, 0.0}};
        amps = bs_coherent(amps, ModeIndex{0}, ModeIndex{1}, bs1);
        amps = xpm_coherent_branch(amps, ModeIndex{0}, true, xpm);
        amps = bs_coherent(amps, ModeIndex{0}, ModeIndex{1}, bs2);

        auto expected = tensor(std::vector{make_fock({1}, {1}), make_coherent(amps.values[0], TruncationPolicy::fixed(cap, 0.5)),
                                           make_coherent(amps.values[1], TruncationPolicy::fixed(cap, 0.5))});
        EXPECT_GE(fidelity(ket, expected), 1 - 1e-9) << "|beta|=" << mag;
        EXPECT_LT(max_amplitude_distance(ket, expected), 1e-6);
    }
}
