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

#ifndef XPMHERALD_MZI_H
#define XPMHERALD_MZI_H

#include <cstdint>
#include <optional>
#include <variant>

#include "xpmherald/fock.h"
#include "xpmherald/optics.h"

namespace xpmh {

/// Register layout of the heralding interferometer.
inline constexpr ModeIndex kSignalMode{0};  // A: noisy source, XPM partner
inline constexpr ModeIndex kProbeMode{1};   // B: upper arm, passes the XPM medium
inline constexpr ModeIndex kHeraldMode{2};  // C: lower arm, ends on the detector

/// Mach-Zehnder interferometer with cross-phase modulation in the upper arm:
/// BS1 on (B, C), XPM on (A, B), BS2 on (B, C), detector on C.
struct MziConfig {
    BeamSplitterParams bs1;
    BeamSplitterParams bs2;
    XpmParams xpm;

    /// theta1 + theta2 = l pi with phi1 - phi2 = 2 k pi.
    static MziConfig sum_constrained(double theta1, double phi1, double phi_chi, int l = 1, int k = 0);
    /// theta1 - theta2 = l pi with phi1 - phi2 = (2k + 1) pi.
    static MziConfig difference_constrained(double theta1, double phi1, double phi_chi, int l = 0, int k = 0);
};

/// Imperfect single-photon source emitting p |1><1| + (1 - p) |0><0|.
struct NoisySource {
    double p = 1.0;

    void validate() const;
};

struct CoherentProbe {
    Complex beta;
};

/// State fed into the probe mode B.
using ProbeSpec = std::variant<NoisySource, CoherentProbe>;

enum class PropagationPath {
    kAuto,       // classical for coherent probes with |beta|^2 > 16, exact otherwise
    kExact,      // truncated Fock-space propagation
    kClassical,  // coherent-amplitude propagation (coherent probes only)
};

/// Mean photon number above which kAuto switches a coherent probe to the classical path.
inline constexpr double kClassicalPathThreshold = 16.0;

struct RunOptions {
    TruncationPolicy policy = TruncationPolicy::automatic(1e-10);
    PropagationPath path = PropagationPath::kAuto;
    /// Reject configurations that are not transparent.
    bool require_heralding = true;
    double transparency_tol = 1e-9;
};

/// Everything `run_setup` learns about one configuration.
struct HeraldOutcome {
    double p_click = 0.0;
    /// p(click | one photon in A), the detection efficiency P_E.
    double detection_efficiency = 0.0;
    /// p(click | vacuum in A); zero for transparent configurations.
    double p_click_given_vacuum = 0.0;
    /// P_T = P_E p_A.
    double total_success = 0.0;
    /// Probability mass lost to Fock truncation; an error bar on every probability.
    double truncation_deficit = 0.0;
    PropagationPath path_used = PropagationPath::kExact;

    /// Post-measurement states on (A, B, C); only filled by the exact path and
    /// only when the corresponding event has non-zero probability.
    std::optional<Ensemble> click_state;
    std::optional<Ensemble> no_click_state;

    /// p(1 in A | click). Unset when p_click == 0.
    std::optional<double> purity;

    /// Throws ConditioningError when no click can occur.
    double purity_given_click() const;
};

/// Amplitude of |0, 0, 1> after the interferometer for input |0, 1, 0>.
Complex c001_amplitude(const MziConfig &cfg);

/// Product U1 U2 of the two beam-splitter substitution matrices.
Matrix2 interferometer_matrix(const MziConfig &cfg);

/// +1 or -1 when U1 U2 = +-identity within `tol`, nothing otherwise. Both
/// signs leave an empty-signal interferometer without light in C; -1 applies
/// the photon-number parity (-1)^N to B and C.
std::optional<int> transparency_sign(const MziConfig &cfg, double tol = 1e-9);

bool is_transparent(const MziConfig &cfg, double tol = 1e-9);

/// Classical-path propagation of |beta>_B |0>_C through the interferometer
/// with zero or one photon in A. Returns the outgoing (B, C) amplitudes.
CoherentAmplitudes propagate_coherent(const MziConfig &cfg, bool signal_photon, Complex beta);

/// Exact propagation of {p_A |1>, 1 - p_A |0>} (x) probe (x) |0>_C through the
/// interferometer followed by the click detector on C.
HeraldOutcome run_setup(const MziConfig &cfg, const NoisySource &source, const ProbeSpec &probe,
                        const RunOptions &options = {});

/// Closed-form click probability for single photons in A and B:
/// sin^2(phi_chi / 2) sin^2(2 theta1). Throws ConfigurationError unless transparent.
double click_prob_fock(const MziConfig &cfg, double tol = 1e-9);

/// Closed-form P_E: sin^2(phi_chi/2) sin^2(2 theta1) p_B for a noisy probe,
/// 1 - exp(-|beta|^2 sin^2(2 theta1) sin^2(phi_chi/2)) for a coherent one.
double detection_efficiency(const MziConfig &cfg, const ProbeSpec &probe, double tol = 1e-9);

/// Beam-splitter angle maximizing P_E. It does not depend on phi_chi.
double optimal_theta1(double phi_chi);

struct Theta1Sweep {
    double best_theta1;
    double best_efficiency;
};

/// Grid search over theta1 in (0, pi) with sum-constrained transparent
/// configurations; verifies `optimal_theta1`.
Theta1Sweep sweep_theta1(double phi_chi, const ProbeSpec &probe, std::size_t points);

struct ShotCounts {
    std::uint64_t click_and_photon = 0;
    std::uint64_t click_no_photon = 0;
    std::uint64_t no_click_photon = 0;
    std::uint64_t no_click_no_photon = 0;

    std::uint64_t clicks() const {
        return click_and_photon + click_no_photon;
    }
    std::uint64_t total() const {
        return clicks() + no_click_photon + no_click_no_photon;
    }
};

/// Monte Carlo photodetection: each shot samples the source branch and the
/// probe branch, propagates, and samples the detector. Deterministic for a
/// given seed regardless of `threads`.
ShotCounts sample_shots(const MziConfig &cfg, const NoisySource &source, const ProbeSpec &probe,
                        std::uint64_t n_shots, std::uint64_t seed, unsigned threads = 1,
                        const RunOptions &options = {});

}  // namespace xpmh

#endif
