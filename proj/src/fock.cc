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

#include "xpmherald/fock.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xpmherald/errors.h"

namespace xpmh {

namespace {

// Poisson(mean) probabilities for k = 0..K, where K lies past the mode and
// the terms have dropped below `floor` relative to the peak.
std::vector<double> poisson_terms(double mean, std::uint32_t at_least, double floor) {
    std::vector<double> terms;
    if (mean == 0.0) {
        terms.assign(std::size_t{at_least} + 1, 0.0);
        terms[0] = 1.0;
        return terms;
    }
    double log_mean = std::log(mean);
    double peak = 0.0;
    for (std::uint32_t k = 0;; ++k) {
        double t = std::exp(-mean + k * log_mean - std::lgamma(k + 1.0));
        terms.push_back(t);
        peak = std::max(peak, t);
        if (k >= at_least && k > mean && (t == 0.0 || t < floor * peak)) {
            break;
        }
    }
    return terms;
}

std::vector<double> suffix_sums(const std::vector<double> &terms) {
    std::vector<double> sums(terms.size() + 1, 0.0);
    for (std::size_t k = terms.size(); k-- > 0;) {
        sums[k] = sums[k + 1] + terms[k];
    }
    return sums;
}

constexpr double kTailFloor = 1e-30;

}  // namespace

TruncationPolicy TruncationPolicy::automatic(double tail_tolerance) {
    return TruncationPolicy{tail_tolerance, std::nullopt};
}

TruncationPolicy TruncationPolicy::fixed(std::uint32_t n_max, double tail_tolerance) {
    return TruncationPolicy{tail_tolerance, n_max};
}

void TruncationPolicy::validate() const {
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw ConfigurationError("truncation tail tolerance must lie in (0, 1), got " +
                                 std::to_string(tail_tolerance));
    }
}

MultiModeKet::MultiModeKet(Cutoffs cutoffs) : cutoffs_(std::move(cutoffs)) {
}

void MultiModeKet::check_fits(const Occupation &occupation) const {
    if (occupation.size() != cutoffs_.size()) {
        throw ModeMismatchError("occupation tuple has " + std::to_string(occupation.size()) +
                                " modes, register has " + std::to_string(cutoffs_.size()));
    }
    for (std::size_t m = 0; m < occupation.size(); ++m) {
        if (occupation[m] > cutoffs_[m]) {
            throw CutoffError("occupation " + std::to_string(occupation[m]) + " of mode " +
                              std::to_string(m) + " exceeds cutoff " + std::to_string(cutoffs_[m]));
        }
    }
}

Complex MultiModeKet::amplitude(const Occupation &occupation) const {
    auto it = terms_.find(occupation);
    return it == terms_.end() ? Complex{} : it->second;
}

void MultiModeKet::add(const Occupation &occupation, Complex value) {
    check_fits(occupation);
    terms_[occupation] += value;
}

void MultiModeKet::set_truncation_deficit(double deficit) {
    deficit_ = std::clamp(deficit, 0.0, 1.0);
}

double MultiModeKet::norm2() const {
    double total = 0.0;
    for (const auto &[occ, amp] : terms_) {
        total += std::norm(amp);
    }
    return total;
}

MultiModeKet MultiModeKet::scaled(Complex factor) const {
    MultiModeKet out = *this;
    for (auto &[occ, amp] : out.terms_) {
        amp *= factor;
    }
    return out;
}

MultiModeKet MultiModeKet::with_cutoffs(const Cutoffs &cutoffs) const {
    if (cutoffs.size() != cutoffs_.size()) {
        throw ModeMismatchError("with_cutoffs: register size mismatch");
    }
    for (std::size_t m = 0; m < cutoffs.size(); ++m) {
        if (cutoffs[m] < cutoffs_[m]) {
            throw CutoffError("with_cutoffs: cutoffs may only grow");
        }
    }
    MultiModeKet out = *this;
    out.cutoffs_ = cutoffs;
    return out;
}

void MultiModeKet::prune(double threshold) {
    std::erase_if(terms_, [threshold](const auto &kv) { return std::abs(kv.second) <= threshold; });
}

double Ensemble::total_weight() const {
    double total = 0.0;
    for (const auto &b : branches) {
        total += b.weight;
    }
    return total;
}

double Ensemble::truncation_deficit() const {
    double total = 0.0;
    for (const auto &b : branches) {
        total += b.weight * b.ket.truncation_deficit();
    }
    return total;
}

void Ensemble::validate() const {
    for (const auto &b : branches) {
        if (!(b.weight >= 0.0)) {
            throw ConfigurationError("ensemble weight must be non-negative");
        }
        if (b.ket.num_modes() != branches.front().ket.num_modes()) {
            throw ModeMismatchError("ensemble branches live on different registers");
        }
    }
}

MultiModeKet make_fock(const Occupation &occupation, const Cutoffs &cutoffs) {
    MultiModeKet ket(cutoffs);
    ket.add(occupation, 1.0);
    return ket;
}

MultiModeKet make_vacuum(const Cutoffs &cutoffs) {
    return make_fock(Occupation(cutoffs.size(), 0), cutoffs);
}

double poisson_tail(double mean, std::uint32_t n_max) {
    auto terms = poisson_terms(mean, n_max + 1, kTailFloor);
    auto sums = suffix_sums(terms);
    return sums[std::size_t{n_max} + 1];
}

std::uint32_t coherent_cutoff(double mean, double tail_tolerance) {
    auto terms = poisson_terms(mean, 1, std::min(kTailFloor, tail_tolerance * 1e-6));
    auto sums = suffix_sums(terms);
    for (std::size_t n = 0; n + 1 < sums.size(); ++n) {
        if (sums[n + 1] < tail_tolerance) {
            return static_cast<std::uint32_t>(std::max<std::size_t>(n, 1));
        }
    }
    return static_cast<std::uint32_t>(terms.size());
}

MultiModeKet make_coherent(Complex beta, const TruncationPolicy &policy) {
    policy.validate();
    double mean = std::norm(beta);
    std::uint32_t n_max =
        policy.fixed_cutoff ? *policy.fixed_cutoff : coherent_cutoff(mean, policy.tail_tolerance);
    double tail = poisson_tail(mean, n_max);
    if (tail >= policy.tail_tolerance) {
        throw TruncationError("coherent state with |beta|^2 = " + std::to_string(mean) +
                                  " leaves tail mass " + std::to_string(tail) + " above cutoff " +
                                  std::to_string(n_max),
                              tail);
    }

    MultiModeKet ket(Cutoffs{n_max});
    if (mean == 0.0) {
        ket.add({0}, 1.0);
        return ket;
    }
    // Amplitudes in log-magnitude form: log|beta^n e^{-|beta|^2/2} / sqrt(n!)|.
    double log_abs = std::log(std::abs(beta));
    double phase = std::arg(beta);
    for (std::uint32_t n = 0; n <= n_max; ++n) {
        double log_mag = -0.5 * mean + n * log_abs - 0.5 * std::lgamma(n + 1.0);
        double mag = std::exp(log_mag);
        if (mag == 0.0) {
            continue;
        }
        ket.add({n}, std::polar(mag, n * phase));
    }
    ket.set_truncation_deficit(tail);
    return ket;
}

MultiModeKet tensor(const MultiModeKet &a, const MultiModeKet &b) {
    Cutoffs cutoffs = a.cutoffs();
    cutoffs.insert(cutoffs.end(), b.cutoffs().begin(), b.cutoffs().end());
    MultiModeKet out(cutoffs);
    for (const auto &[occ_a, amp_a] : a.terms()) {
        for (const auto &[occ_b, amp_b] : b.terms()) {
            Occupation occ = occ_a;
            occ.insert(occ.end(), occ_b.begin(), occ_b.end());
            out.add(occ, amp_a * amp_b);
        }
    }
    out.set_truncation_deficit(1.0 - (1.0 - a.truncation_deficit()) * (1.0 - b.truncation_deficit()));
    return out;
}

MultiModeKet tensor(std::span<const MultiModeKet> kets) {
    if (kets.empty()) {
        return make_vacuum({});
    }
    MultiModeKet out = kets.front();
    for (const auto &k : kets.subspan(1)) {
        out = tensor(out, k);
    }
    return out;
}

Complex inner(const MultiModeKet &a, const MultiModeKet &b) {
    if (a.num_modes() != b.num_modes()) {
        throw ModeMismatchError("inner: kets have " + std::to_string(a.num_modes()) + " and " +
                                std::to_string(b.num_modes()) + " modes");
    }
    const auto &small = a.terms().size() <= b.terms().size() ? a : b;
    const auto &large = &small == &a ? b : a;
    Complex total{};
    for (const auto &[occ, amp] : small.terms()) {
        auto it = large.terms().find(occ);
        if (it == large.terms().end()) {
            continue;
        }
        total += &small == &a ? std::conj(amp) * it->second : std::conj(it->second) * amp;
    }
    return total;
}

std::vector<double> mode_number_distribution(const MultiModeKet &ket, ModeIndex mode) {
    if (mode.value >= ket.num_modes()) {
        throw ModeMismatchError("mode index " + std::to_string(mode.value) + " out of range");
    }
    double total = ket.norm2();
    if (total <= 0.0) {
        throw ConditioningError("photon-number distribution of a zero-norm ket");
    }
    std::vector<double> dist(std::size_t{ket.cutoffs()[mode.value]} + 1, 0.0);
    for (const auto &[occ, amp] : ket.terms()) {
        dist[occ[mode.value]] += std::norm(amp);
    }
    for (auto &p : dist) {
        p /= total;
    }
    return dist;
}

MultiModeKet project(const MultiModeKet &ket, ModeIndex mode, DetectorEvent event) {
    if (mode.value >= ket.num_modes()) {
        throw ModeMismatchError("mode index " + std::to_string(mode.value) + " out of range");
    }
    MultiModeKet out(ket.cutoffs());
    for (const auto &[occ, amp] : ket.terms()) {
        bool empty = occ[mode.value] == 0;
        if (empty == (event == DetectorEvent::kZero)) {
            out.add(occ, amp);
        }
    }
    out.set_truncation_deficit(ket.truncation_deficit());
    return out;
}

ConditionedEnsemble condition(const Ensemble &ensemble, ModeIndex mode, DetectorEvent event) {
    ensemble.validate();
    ConditionedEnsemble result{0.0, {}};
    std::vector<std::pair<double, MultiModeKet>> kept;
    for (const auto &b : ensemble.branches) {
        MultiModeKet projected = project(b.ket, mode, event);
        double p = b.weight * projected.norm2();
        if (p > 0.0) {
            result.probability += p;
            kept.emplace_back(p, std::move(projected));
        }
    }
    if (result.probability <= 0.0) {
        throw ConditioningError("conditioning on an event of probability zero");
    }
    for (auto &[p, ket] : kept) {
        double n2 = ket.norm2();
        double deficit = ket.truncation_deficit();
        MultiModeKet normalized = ket.scaled(1.0 / std::sqrt(n2));
        normalized.set_truncation_deficit(std::min(1.0, deficit / n2));
        result.state.branches.push_back({p / result.probability, std::move(normalized)});
    }
    return result;
}

double fidelity(const MultiModeKet &a, const MultiModeKet &b) {
    double na = a.norm2();
    double nb = b.norm2();
    if (na <= 0.0 || nb <= 0.0) {
        return 0.0;
    }
    return std::norm(inner(a, b)) / (na * nb);
}

double max_amplitude_distance(const MultiModeKet &a, const MultiModeKet &b) {
    double worst = 0.0;
    for (const auto &[occ, amp] : a.terms()) {
        worst = std::max(worst, std::abs(amp - b.amplitude(occ)));
    }
    for (const auto &[occ, amp] : b.terms()) {
        if (!a.terms().contains(occ)) {
            worst = std::max(worst, std::abs(amp));
        }
    }
    return worst;
}

bool equal_up_to_global_phase(const MultiModeKet &a, const MultiModeKet &b, double tol) {
    return std::abs(inner(a, b)) >= (1.0 - tol) * std::sqrt(a.norm2() * b.norm2());
}

}  // namespace xpmh
