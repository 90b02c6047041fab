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

#include "xpmherald/mzi.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "xpmherald/errors.h"
#include "xpmherald/parallel.h"
#include "xpmherald/rng.h"

namespace xpmh {

namespace {

using std::numbers::pi;

// Events with smaller probability are round-off of amplitudes that vanish
// analytically (e.g. false clicks of a transparent interferometer).
constexpr double kImpossibleEvent = 1e-26;

double click_from_mean(double mean_photons) {
    return -std::expm1(-mean_photons);
}

struct ProbeBranch {
    double weight;
    MultiModeKet ket;             // exact path
    CoherentAmplitudes classical;  // classical path (B, C)
};

// Propagated branch for a definite photon number in A.
struct PropagatedBranch {
    double weight;  // probe-branch weight only
    double p_click;
    MultiModeKet ket;  // empty register on the classical path
};

struct BranchTable {
    PropagationPath path;
    // Index 0: vacuum in A, index 1: one photon in A.
    std::vector<PropagatedBranch> by_signal[2];
    double deficit = 0.0;

    double click_given(int photons) const {
        double total = 0.0;
        for (const auto &b : by_signal[photons]) {
            total += b.weight * b.p_click;
        }
        return total;
    }
};

PropagationPath resolve_path(const ProbeSpec &probe, PropagationPath requested) {
    const auto *coherent = std::get_if<CoherentProbe>(&probe);
    if (requested == PropagationPath::kClassical && coherent == nullptr) {
        throw ConfigurationError("the classical path needs a coherent probe");
    }
    if (requested != PropagationPath::kAuto) {
        return requested;
    }
    if (coherent != nullptr && std::norm(coherent->beta) > kClassicalPathThreshold) {
        return PropagationPath::kClassical;
    }
    return PropagationPath::kExact;
}

std::vector<ProbeBranch> probe_branches(const ProbeSpec &probe, PropagationPath path,
                                        const TruncationPolicy &policy) {
    std::vector<ProbeBranch> out;
    if (const auto *noisy = std::get_if<NoisySource>(&probe)) {
        noisy->validate();
        if (noisy->p > 0.0) {
            out.push_back({noisy->p, make_fock({1}, {1}), {}});
        }
        if (noisy->p < 1.0) {
            out.push_back({1.0 - noisy->p, make_fock({0}, {1}), {}});
        }
        return out;
    }
    Complex beta = std::get<CoherentProbe>(probe).beta;
    if (path == PropagationPath::kClassical) {
        out.push_back({1.0, MultiModeKet{}, CoherentAmplitudes{{beta, 0.0}}});
    } else {
        out.push_back({1.0, make_coherent(beta, policy), {}});
    }
    return out;
}

MultiModeKet propagate_exact(const MziConfig &cfg, std::uint32_t signal_photons, const MultiModeKet &probe) {
    std::uint32_t cap = std::max<std::uint32_t>(probe.cutoffs()[0], 1);
    MultiModeKet ket = tensor(std::vector{make_fock({signal_photons}, {1}), probe.with_cutoffs({cap}),
                                          make_vacuum({cap})});
    ket = apply_beam_splitter(ket, kProbeMode, kHeraldMode, cfg.bs1);
    ket = apply_xpm(ket, kSignalMode, kProbeMode, cfg.xpm);
    return apply_beam_splitter(ket, kProbeMode, kHeraldMode, cfg.bs2);
}

CoherentAmplitudes propagate_classical(const MziConfig &cfg, bool signal_photon, const CoherentAmplitudes &bc) {
    constexpr ModeIndex b{0}, c{1};
    CoherentAmplitudes amps = bs_coherent(bc, b, c, cfg.bs1);
    amps = xpm_coherent_branch(amps, b, signal_photon, cfg.xpm);
    return bs_coherent(amps, b, c, cfg.bs2);
}

BranchTable build_table(const MziConfig &cfg, const ProbeSpec &probe, const RunOptions &options) {
    options.policy.validate();
    if (options.require_heralding && !is_transparent(cfg, options.transparency_tol)) {
        throw ConfigurationError("interferometer is not transparent; heralding is not guaranteed");
    }
    BranchTable table;
    table.path = resolve_path(probe, options.path);
    for (const auto &pb : probe_branches(probe, table.path, options.policy)) {
        for (std::uint32_t a = 0; a <= 1; ++a) {
            if (table.path == PropagationPath::kClassical) {
                auto out = propagate_classical(cfg, a == 1, pb.classical);
                table.by_signal[a].push_back({pb.weight, click_from_mean(std::norm(out.values[1])), MultiModeKet{}});
                continue;
            }
            MultiModeKet ket = propagate_exact(cfg, a, pb.ket);
            double p_click = project(ket, kHeraldMode, DetectorEvent::kAtLeastOne).norm2();
            table.by_signal[a].push_back({pb.weight, p_click, std::move(ket)});
        }
        if (table.path == PropagationPath::kExact) {
            table.deficit += pb.weight * pb.ket.truncation_deficit();
        }
    }
    if (table.deficit >= options.policy.tail_tolerance) {
        throw TruncationError("truncation deficit " + std::to_string(table.deficit) + " exceeds tolerance",
                              table.deficit);
    }
    return table;
}

}  // namespace

MziConfig MziConfig::sum_constrained(double theta1, double phi1, double phi_chi, int l, int k) {
    return {{theta1, phi1}, {l * pi - theta1, phi1 - 2 * k * pi}, {phi_chi}};
}

MziConfig MziConfig::difference_constrained(double theta1, double phi1, double phi_chi, int l, int k) {
    return {{theta1, phi1}, {theta1 - l * pi, phi1 - (2 * k + 1) * pi}, {phi_chi}};
}

void NoisySource::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigurationError("source efficiency must lie in [0, 1], got " + std::to_string(p));
    }
}

double HeraldOutcome::purity_given_click() const {
    if (!purity) {
        throw ConditioningError("p(1 in A | click) is undefined: the detector cannot click");
    }
    return *purity;
}

CoherentAmplitudes propagate_coherent(const MziConfig &cfg, bool signal_photon, Complex beta) {
    return propagate_classical(cfg, signal_photon, {{beta, 0.0}});
}

Complex c001_amplitude(const MziConfig &cfg) {
    const auto &[t1, f1] = cfg.bs1;
    const auto &[t2, f2] = cfg.bs2;
    return std::polar(std::cos(t1) * std::sin(t2), -f2) + std::polar(std::sin(t1) * std::cos(t2), -f1);
}

Matrix2 interferometer_matrix(const MziConfig &cfg) {
    return multiply(beam_splitter_matrix(cfg.bs1), beam_splitter_matrix(cfg.bs2));
}

std::optional<int> transparency_sign(const MziConfig &cfg, double tol) {
    Matrix2 m = interferometer_matrix(cfg);
    for (int sign : {1, -1}) {
        double worst = 0.0;
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                worst = std::max(worst, std::abs(m[r][c] - Complex(r == c ? sign : 0)));
            }
        }
        if (worst <= tol) {
            return sign;
        }
    }
    return std::nullopt;
}

bool is_transparent(const MziConfig &cfg, double tol) {
    return transparency_sign(cfg, tol).has_value();
}

HeraldOutcome run_setup(const MziConfig &cfg, const NoisySource &source, const ProbeSpec &probe,
                        const RunOptions &options) {
    source.validate();
    BranchTable table = build_table(cfg, probe, options);

    HeraldOutcome out;
    out.path_used = table.path;
    out.truncation_deficit = table.deficit;
    out.detection_efficiency = table.click_given(1);
    out.p_click_given_vacuum = table.click_given(0);
    out.p_click = source.p * out.detection_efficiency + (1.0 - source.p) * out.p_click_given_vacuum;
    out.total_success = out.detection_efficiency * source.p;

    if (table.path == PropagationPath::kClassical) {
        if (out.p_click > kImpossibleEvent) {
            out.purity = source.p * out.detection_efficiency / out.p_click;
        }
        return out;
    }

    Ensemble full;
    const double signal_weight[2] = {1.0 - source.p, source.p};
    for (int a = 0; a <= 1; ++a) {
        if (signal_weight[a] == 0.0) {
            continue;
        }
        for (auto &b : table.by_signal[a]) {
            full.branches.push_back({signal_weight[a] * b.weight, std::move(b.ket)});
        }
    }
    if (out.p_click > kImpossibleEvent) {
        auto clicked = condition(full, kHeraldMode, DetectorEvent::kAtLeastOne);
        double one_photon = 0.0;
        for (const auto &b : clicked.state.branches) {
            one_photon += b.weight * mode_number_distribution(b.ket, kSignalMode)[1];
        }
        out.purity = one_photon;
        out.click_state = std::move(clicked.state);
    }
    if (1.0 - out.p_click > kImpossibleEvent) {
        out.no_click_state = condition(full, kHeraldMode, DetectorEvent::kZero).state;
    }
    return out;
}

double click_prob_fock(const MziConfig &cfg, double tol) {
    if (!is_transparent(cfg, tol)) {
        throw ConfigurationError("closed-form click probability requires a transparent interferometer");
    }
    double half = std::sin(cfg.xpm.phi_chi / 2);
    double two = std::sin(2 * cfg.bs1.theta);
    return half * half * two * two;
}

double detection_efficiency(const MziConfig &cfg, const ProbeSpec &probe, double tol) {
    double fock = click_prob_fock(cfg, tol);
    if (const auto *noisy = std::get_if<NoisySource>(&probe)) {
        noisy->validate();
        return fock * noisy->p;
    }
    return click_from_mean(std::norm(std::get<CoherentProbe>(probe).beta) * fock);
}

double optimal_theta1(double /*phi_chi*/) {
    return pi / 4;
}

Theta1Sweep sweep_theta1(double phi_chi, const ProbeSpec &probe, std::size_t points) {
    Theta1Sweep best{0.0, -1.0};
    for (std::size_t i = 1; i < points; ++i) {
        double theta1 = pi * static_cast<double>(i) / static_cast<double>(points);
        double eff = detection_efficiency(MziConfig::sum_constrained(theta1, 0.0, phi_chi), probe);
        if (eff > best.best_efficiency) {
            best = {theta1, eff};
        }
    }
    return best;
}

ShotCounts sample_shots(const MziConfig &cfg, const NoisySource &source, const ProbeSpec &probe,
                        std::uint64_t n_shots, std::uint64_t seed, unsigned threads, const RunOptions &options) {
    if (n_shots == 0) {
        throw ConfigurationError("sample_shots needs at least one shot");
    }
    source.validate();
    const BranchTable table = build_table(cfg, probe, options);
    const CounterRng rng(seed);

    constexpr std::uint64_t kBatch = 1 << 16;
    const std::size_t batches = static_cast<std::size_t>((n_shots + kBatch - 1) / kBatch);
    std::vector<ShotCounts> partial(batches);
    parallel_for(batches, threads, [&](std::size_t batch) {
        ShotCounts &counts = partial[batch];
        std::uint64_t end = std::min<std::uint64_t>(n_shots, (batch + 1) * kBatch);
        for (std::uint64_t shot = batch * kBatch; shot < end; ++shot) {
            bool photon = rng.uniform(shot, 0) < source.p;
            const auto &branches = table.by_signal[photon ? 1 : 0];
            double u = rng.uniform(shot, 1);
            std::size_t pick = 0;
            for (double acc = branches[0].weight; pick + 1 < branches.size() && u >= acc;) {
                acc += branches[++pick].weight;
            }
            bool click = rng.uniform(shot, 2) < branches[pick].p_click;
            if (click) {
                ++(photon ? counts.click_and_photon : counts.click_no_photon);
            } else {
                ++(photon ? counts.no_click_photon : counts.no_click_no_photon);
            }
        }
    });
    ShotCounts total;
    for (const auto &c : partial) {
        total.click_and_photon += c.click_and_photon;
        total.click_no_photon += c.click_no_photon;
        total.no_click_photon += c.no_click_photon;
        total.no_click_no_photon += c.no_click_no_photon;
    }
    return total;
}

}  // namespace xpmh
