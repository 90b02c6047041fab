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

#include "xpmherald/verify.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "xpmherald/cascade.h"
#include "xpmherald/errors.h"
#include "xpmherald/harness.h"
#include "xpmherald/loss.h"
#include "xpmherald/mzi.h"
#include "xpmherald/parallel.h"
#include "xpmherald/rng.h"

namespace xpmh::harness {

namespace {

using std::numbers::pi;

std::string fmt(const char *format, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::string describe(const MziConfig &c) {
    return fmt("theta1=%.6g phi1=%.6g theta2=%.6g phi2=%.6g phi_chi=%.6g", c.bs1.theta, c.bs1.phi, c.bs2.theta,
               c.bs2.phi, c.xpm.phi_chi);
}

// Tracks the largest violation seen across many cases.
struct Worst {
    double value = -1.0;
    std::string params;

    void offer(double v, const std::string &p) {
        if (v > value || std::isnan(v)) {
            value = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
            params = p;
        }
    }
};

CheckResult bounded(std::string module, std::string property, const Worst &w, double bound, const char *what) {
    return {std::move(module), std::move(property), w.params, fmt("%s = %.3e", what, w.value),
            fmt("%s <= %.1e", what, bound), w.value <= bound};
}

class Draws {
   public:
    Draws(std::uint64_t seed, std::uint64_t stream) : rng_(CounterRng(seed).split(stream)) {
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * rng_.uniform(counter_++, 0);
    }
    int integer(int lo, int hi) {
        return lo + static_cast<int>(rng_.uniform(counter_++, 0) * (hi - lo + 1));
    }

   private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

MziConfig random_transparent(Draws &d) {
    double theta1 = d.uniform(0.0, pi);
    double phi1 = d.uniform(-pi, pi);
    double phi_chi = d.uniform(0.05, 2 * pi - 0.05);
    int l = d.integer(-1, 2);
    int k = d.integer(-1, 1);
    return d.integer(0, 1) == 0 ? MziConfig::sum_constrained(theta1, phi1, phi_chi, l, k)
                                : MziConfig::difference_constrained(theta1, phi1, phi_chi, l, k);
}

MziConfig random_generic(Draws &d) {
    MziConfig c;
    c.bs1 = {d.uniform(0.05, pi - 0.05), d.uniform(-pi, pi)};
    c.bs2 = {d.uniform(0.05, pi - 0.05), d.uniform(-pi, pi)};
    c.xpm = {d.uniform(0.05, 2 * pi - 0.05)};
    return c;
}

using TwoModeState = std::map<std::pair<std::uint32_t, std::uint32_t>, Complex>;

double factorial(std::uint32_t n) {
    return std::tgamma(n + 1.0);
}

// Substitutes a1^dag -> m[0][0] x + m[0][1] y, a2^dag -> m[1][0] x + m[1][1] y.
TwoModeState transform(const TwoModeState &in, const Matrix2 &m) {
    TwoModeState out;
    for (const auto &[occ, amp] : in) {
        auto [n1, n2] = occ;
        std::map<std::pair<std::uint32_t, std::uint32_t>, Complex> poly{{{0, 0}, amp}};
        auto multiply_by = [&](Complex cx, Complex cy) {
            std::map<std::pair<std::uint32_t, std::uint32_t>, Complex> next;
            for (const auto &[pq, c] : poly) {
                next[{pq.first + 1, pq.second}] += c * cx;
                next[{pq.first, pq.second + 1}] += c * cy;
            }
            poly = std::move(next);
        };
        for (std::uint32_t i = 0; i < n1; ++i) {
            multiply_by(m[0][0], m[0][1]);
        }
        for (std::uint32_t i = 0; i < n2; ++i) {
            multiply_by(m[1][0], m[1][1]);
        }
        double norm_in = std::sqrt(factorial(n1) * factorial(n2));
        for (const auto &[pq, c] : poly) {
            out[pq] += c * std::sqrt(factorial(pq.first) * factorial(pq.second)) / norm_in;
        }
    }
    return out;
}

TwoModeState random_two_mode(Draws &d, std::uint32_t max_total) {
    TwoModeState s;
    double norm2 = 0.0;
    for (std::uint32_t n1 = 0; n1 <= max_total; ++n1) {
        for (std::uint32_t n2 = 0; n1 + n2 <= max_total; ++n2) {
            Complex a(d.uniform(-1, 1), d.uniform(-1, 1));
            s[{n1, n2}] = a;
            norm2 += std::norm(a);
        }
    }
    for (auto &[_, a] : s) {
        a /= std::sqrt(norm2);
    }
    return s;
}

double distance(const TwoModeState &a, const TwoModeState &b) {
    double worst = 0.0;
    for (const auto &[k, v] : a) {
        auto it = b.find(k);
        worst = std::max(worst, std::abs(v - (it == b.end() ? Complex{} : it->second)));
    }
    for (const auto &[k, v] : b) {
        if (!a.contains(k)) {
            worst = std::max(worst, std::abs(v));
        }
    }
    return worst;
}

struct Sizes {
    std::size_t random_configs;
    std::size_t grid;
    std::uint32_t unitarity_photons;
    std::uint64_t shots;
    std::uint32_t cascade_n;
    std::uint32_t enumerated_n;
};

void check_fock(const Sizes &, std::vector<CheckResult> &out) {
    Worst w;
    for (double beta : {0.5, 1.0, 2.0, 4.0, 6.0}) {
        auto ket = make_coherent(Complex(beta, 0.3), TruncationPolicy::automatic(1e-10));
        w.offer(std::abs(ket.norm2() + ket.truncation_deficit() - 1.0), fmt("|beta|~%.2g", beta));
        w.offer(ket.truncation_deficit() >= 1e-10 ? 1.0 : 0.0, fmt("deficit bound at |beta|~%.2g", beta));
    }
    out.push_back(bounded("fock-core", "coherent norm plus deficit is one", w, 1e-12, "|norm2 + deficit - 1|"));
}

void check_optics(const Sizes &sz, const VerifyOptions &opt, std::vector<CheckResult> &out) {
    Draws d(opt.seed, 1);
    Worst unitary;
    for (std::uint32_t total : {1u, 5u, sz.unitarity_photons}) {
        MultiModeKet ket({total, total});
        for (std::uint32_t k = 0; k <= total; ++k) {
            ket.add({k, total - k}, Complex(d.uniform(-1, 1), d.uniform(-1, 1)));
        }
        BeamSplitterParams p{d.uniform(0, pi), d.uniform(-pi, pi)};
        auto outk = apply_beam_splitter(ket, ModeIndex{0}, ModeIndex{1}, p);
        unitary.offer(std::abs(outk.norm2() - ket.norm2()) / ket.norm2(),
                      fmt("N=%u theta=%.6g phi=%.6g", total, p.theta, p.phi));
    }
    out.push_back(bounded("optics-elements", "beam splitter preserves norm", unitary, 1e-12, "relative norm change"));

    Worst transparent;
    for (std::size_t i = 0; i < sz.random_configs; ++i) {
        MziConfig cfg = random_transparent(d);
        auto sign = transparency_sign(cfg);
        if (!sign) {
            transparent.offer(std::numeric_limits<double>::infinity(), describe(cfg) + " not classified transparent");
            continue;
        }
        Matrix2 m = multiply(opt.beam_splitter(cfg.bs1), opt.beam_splitter(cfg.bs2));
        auto in = random_two_mode(d, 3);
        TwoModeState expected;
        for (const auto &[occ, a] : in) {
            expected[occ] = ((occ.first + occ.second) % 2 == 1 && *sign < 0) ? -a : a;
        }
        transparent.offer(distance(transform(in, m), expected), describe(cfg) + fmt(" sign=%d", *sign));
    }
    out.push_back(bounded("optics-elements", "transparent interferometer returns its B,C input", transparent, 1e-12,
                          "max amplitude error"));

    Worst missed;
    for (std::size_t i = 0; i < sz.random_configs; ++i) {
        MziConfig cfg = random_generic(d);
        if (is_transparent(cfg, 1e-6)) {
            continue;
        }
        Matrix2 m = multiply(opt.beam_splitter(cfg.bs1), opt.beam_splitter(cfg.bs2));
        double best = 0.0;
        for (auto occ : {std::pair<std::uint32_t, std::uint32_t>{1, 0}, {0, 1}}) {
            TwoModeState in{{occ, 1.0}};
            TwoModeState flipped{{occ, -1.0}};
            best = std::max(best, std::min(distance(transform(in, m), in), distance(transform(in, m), flipped)));
        }
        missed.offer(-best, describe(cfg));
    }
    out.push_back({"optics-elements", "non-transparent interferometer alters some input", missed.params,
                   fmt("smallest violation = %.3e", -missed.value), "smallest violation >= 1e-6",
                   -missed.value >= 1e-6});
}

struct HeraldCase {
    MziConfig cfg;
    ProbeSpec probe;
    double false_click = 0.0;
    std::optional<double> purity;
};

std::string describe_probe(const ProbeSpec &p) {
    if (const auto *n = std::get_if<NoisySource>(&p)) {
        return fmt("p_B=%.6g", n->p);
    }
    Complex b = std::get<CoherentProbe>(p).beta;
    return fmt("beta=%.6g%+.6gi", b.real(), b.imag());
}

void check_herald(const Sizes &sz, const VerifyOptions &opt, std::vector<CheckResult> &out) {
    Draws d(opt.seed, 2);
    std::vector<HeraldCase> cases;
    for (std::size_t i = 0; i < sz.random_configs; ++i) {
        MziConfig cfg = random_transparent(d);
        ProbeSpec probe = i % 2 == 0 ? ProbeSpec(NoisySource{d.uniform(0, 1)})
                                     : ProbeSpec(CoherentProbe{std::polar(d.uniform(0, 2), d.uniform(-pi, pi))});
        cases.push_back({cfg, probe, 0.0, std::nullopt});
    }
    parallel_for(cases.size(), opt.threads, [&](std::size_t i) {
        RunOptions o;
        o.path = PropagationPath::kExact;
        auto r = run_setup(cases[i].cfg, NoisySource{0.5}, cases[i].probe, o);
        cases[i].false_click = r.p_click_given_vacuum;
        cases[i].purity = r.purity;
    });
    Worst false_click, impurity;
    for (const auto &c : cases) {
        std::string where = describe(c.cfg) + " " + describe_probe(c.probe);
        false_click.offer(c.false_click, where);
        if (c.purity) {
            impurity.offer(1.0 - *c.purity, where);
        }
    }
    out.push_back(bounded("herald-mzi", "no click without a photon in A", false_click, 1e-12,
                          "p(click | vacuum in A)"));
    out.push_back(bounded("herald-mzi", "click heralds one photon in A", impurity, 1e-12, "1 - p(1 in A | click)"));

    Worst noisy;
    for (std::size_t i = 0; i < sz.grid; ++i) {
        for (std::size_t j = 0; j < sz.grid; ++j) {
            double theta1 = pi * (i + 0.5) / sz.grid;
            double phi = 2 * pi * j / (sz.grid - 1);
            auto cfg = MziConfig::sum_constrained(theta1, 0.0, phi);
            auto r = run_setup(cfg, NoisySource{1.0}, NoisySource{1.0});
            double closed = std::pow(std::sin(phi / 2) * std::sin(2 * theta1), 2);
            noisy.offer(std::abs(r.p_click - closed), fmt("theta1=%.6g phi_chi=%.6g", theta1, phi));
        }
    }
    out.push_back(bounded("herald-mzi", "single-photon probe matches sin^2(phi_chi/2) sin^2(2 theta1)", noisy, 1e-10,
                          "|exact - closed form|"));

    Worst optimum;
    for (double phi : {0.3, pi / 2, pi, 4.0}) {
        auto s = sweep_theta1(phi, NoisySource{1.0}, 361);
        double spacing = pi / 361;
        double off = std::min(std::abs(s.best_theta1 - pi / 4), std::abs(s.best_theta1 - 3 * pi / 4));
        optimum.offer(off / spacing, fmt("phi_chi=%.6g best_theta1=%.6g", phi, s.best_theta1));
    }
    out.push_back(bounded("herald-mzi", "efficiency peaks at theta1 = pi/4", optimum, 1.0,
                          "distance to pi/4 in grid steps"));

    Worst coherent;
    for (double beta : {0.5, 1.0, 2.0}) {
        for (double theta1 : {pi / 4, 0.3, 1.2}) {
            for (double phi : {0.0, 0.7, pi, 5.0}) {
                auto cfg = MziConfig::sum_constrained(theta1, 0.0, phi);
                RunOptions o;
                o.path = PropagationPath::kExact;
                auto r = run_setup(cfg, NoisySource{1.0}, CoherentProbe{Complex(beta, 0.0)}, o);
                double closed = -std::expm1(-beta * beta * std::pow(std::sin(2 * theta1) * std::sin(phi / 2), 2));
                coherent.offer(std::abs(r.p_click - closed) - r.truncation_deficit,
                               fmt("|beta|=%.3g theta1=%.6g phi_chi=%.6g", beta, theta1, phi));
            }
        }
    }
    out.push_back(bounded("herald-mzi", "coherent probe matches 1 - exp(-|beta|^2 sin^2(2 theta1) sin^2(phi_chi/2))",
                          coherent, 1e-8, "|exact - closed form| - deficit"));

    struct McCase {
        MziConfig cfg;
        double p_a;
        ProbeSpec probe;
    };
    const McCase mc_cases[] = {
        {MziConfig::sum_constrained(pi / 4, 0.0, pi), 0.3, NoisySource{1.0}},
        {MziConfig::sum_constrained(0.5, 1.0, 2.0), 0.7, NoisySource{0.6}},
        {MziConfig::difference_constrained(pi / 4, 0.2, 1.0), 0.5, CoherentProbe{Complex(1.2, 0.4)}},
    };
    Worst sigma, wrong_herald;
    for (std::size_t i = 0; i < std::size(mc_cases); ++i) {
        const auto &c = mc_cases[i];
        auto counts = sample_shots(c.cfg, NoisySource{c.p_a}, c.probe, sz.shots, opt.seed + i, opt.threads);
        double expected = c.p_a * detection_efficiency(c.cfg, c.probe);
        double s = std::sqrt(expected * (1 - expected) / static_cast<double>(sz.shots));
        double rate = static_cast<double>(counts.clicks()) / static_cast<double>(sz.shots);
        std::string where = describe(c.cfg) + fmt(" p_A=%.3g ", c.p_a) + describe_probe(c.probe) +
                            fmt(" shots=%llu", static_cast<unsigned long long>(sz.shots));
        sigma.offer(std::abs(rate - expected) / s, where);
        wrong_herald.offer(static_cast<double>(counts.click_no_photon), where);
    }
    out.push_back(bounded("herald-mzi", "Monte Carlo click frequency", sigma, 4.0, "deviation in sigma"));
    out.push_back(bounded("herald-mzi", "Monte Carlo never clicks without a photon", wrong_herald, 0.0,
                          "click_no_photon"));
}

void check_loss(const Sizes &, std::vector<CheckResult> &out) {
    Worst bounds;
    const struct {
        double beta_sq, reference;
    } refs[] = {{1.0, 0.80}, {1e2, 0.35}, {1e4, 0.06}};
    auto cfg = MziConfig::sum_constrained(pi / 4, 0.0, pi);
    for (const auto &r : refs) {
        auto b = max_tolerable_loss(cfg, Complex(std::sqrt(r.beta_sq), 0.0), SmallPaLimit{});
        bounds.offer(std::abs(b.p_absorb_max - r.reference),
                     fmt("phi_chi=pi |beta|^2=%.3g bound=%.6g reference=%.2g", r.beta_sq, b.p_absorb_max,
                         r.reference));
    }
    out.push_back(bounded("loss-model", "absorption bounds at phi_chi = pi", bounds, 0.05, "|bound - reference|"));

    Worst lossless;
    for (double beta : {0.5, 1.0, 3.0}) {
        for (double phi : {0.4, pi}) {
            auto c = MziConfig::sum_constrained(pi / 4, 0.0, phi);
            auto q = lossy_click_probs(c, Complex(beta, 0.0), LossParams(0.0));
            double pe = detection_efficiency(c, CoherentProbe{Complex(beta, 0.0)});
            lossless.offer(std::max(std::abs(q.q1 - pe), std::abs(q.q0)), fmt("|beta|=%.3g phi_chi=%.6g", beta, phi));
        }
    }
    out.push_back(bounded("loss-model", "zero absorption reproduces the lossless click law", lossless, 1e-12,
                          "max |q - lossless|"));
}

void check_cascade(const Sizes &sz, std::vector<CheckResult> &out) {
    Worst s1, s2;
    for (double phi : {pi, pi / 2, 0.05}) {
        for (double mean : {0.5, 4.0, 25.0}) {
            CascadeConfig c{CascadeScheme::kReuseCoherent, sz.cascade_n, Complex(std::sqrt(mean), 0.0), phi, 0.7};
            auto sim = simulate_cascade(c, ExactCascade{});
            auto closed = evaluate_cascade(c);
            for (std::uint32_t n = 0; n < c.n_setups; ++n) {
                s1.offer(std::abs(sim.per_setup[n] - closed.per_setup[n]),
                         fmt("N=%u |alpha|^2=%.3g phi_chi=%.6g n=%u", c.n_setups, mean, phi, n + 1));
            }
            for (double p : {0.2, 0.5, 1.0}) {
                CascadeConfig m{CascadeScheme::kManySources, sz.enumerated_n, c.alpha, phi, p};
                auto sim2 = simulate_cascade(m, ExactCascade{});
                auto closed2 = evaluate_cascade(m);
                for (std::uint32_t n = 0; n < m.n_setups; ++n) {
                    s2.offer(std::abs(sim2.per_setup[n] - closed2.per_setup[n]),
                             fmt("N=%u |alpha|^2=%.3g phi_chi=%.6g p=%.3g n=%u", m.n_setups, mean, phi, p, n + 1));
                }
            }
        }
    }
    out.push_back(bounded("cascade", "reused probe: closed form equals amplitude recursion", s1, 1e-12, "|diff|"));
    out.push_back(bounded("cascade", "many sources: closed form equals enumeration", s2, 1e-12, "|diff|"));

    Complex alpha(5.0, 0.0);
    double t1 = scheme1_total(100, alpha, pi / 2, 0.6);
    out.push_back({"cascade", "reused probe total approaches p", "N=100 |alpha|^2=25 phi_chi=pi/2 p=0.6",
                   fmt("P_T = %.12f", t1), "|P_T - 0.6| <= 1e-6", std::abs(t1 - 0.6) <= 1e-6});
    double t2 = scheme2_total(100, alpha, pi / 2, 0.3);
    out.push_back({"cascade", "many sources total approaches one", "N=100 |alpha|^2=25 phi_chi=pi/2 p=0.3",
                   fmt("P_T = %.12f", t2), "P_T >= 0.999", t2 >= 0.999});
}

}  // namespace

bool VerifyReport::passed() const {
    return failures() == 0;
}

std::size_t VerifyReport::failures() const {
    std::size_t n = 0;
    for (const auto &c : checks) {
        n += !c.passed;
    }
    return n;
}

VerifyReport verify(const VerifyOptions &options) {
    const Sizes sz = options.suite == VerifySuite::kFast ? Sizes{200, 12, 30, 100000, 30, 8}
                                                         : Sizes{2000, 50, 100, 1000000, 100, 12};
    VerifyReport report;
    auto guarded = [&](const char *module, auto &&fn) {
        try {
            fn();
        } catch (const std::exception &e) {
            report.checks.push_back({module, "suite ran without raising", "", e.what(), "no exception", false});
        }
    };
    guarded("fock-core", [&] { check_fock(sz, report.checks); });
    guarded("optics-elements", [&] { check_optics(sz, options, report.checks); });
    guarded("herald-mzi", [&] { check_herald(sz, options, report.checks); });
    guarded("loss-model", [&] { check_loss(sz, report.checks); });
    guarded("cascade", [&] { check_cascade(sz, report.checks); });
    return report;
}

std::string format_report(const VerifyReport &report) {
    std::string out;
    for (const auto &c : report.checks) {
        out += (c.passed ? "PASS " : "FAIL ") + c.module + ": " + c.property + " [" + c.params + "] observed " +
               c.observed + ", expected " + c.expected + "\n";
    }
    out += fmt("%zu checks, %zu failed\n", report.checks.size(), report.failures());
    return out;
}

}  // namespace xpmh::harness
