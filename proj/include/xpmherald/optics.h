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

#ifndef XPMHERALD_OPTICS_H
#define XPMHERALD_OPTICS_H

#include <array>
#include <vector>

#include "xpmherald/fock.h"

namespace xpmh {

/// Lossless two-mode beam splitter. cos^2(theta) is the reflectivity,
/// sin^2(theta) the transmittivity and phi the relative phase.
///
/// Creation operators of the input modes are replaced by
///   a1^dag -> cos(theta) a1'^dag + e^{-i phi} sin(theta) a2'^dag
///   a2^dag -> -e^{i phi} sin(theta) a1'^dag + cos(theta) a2'^dag
/// and the output modes keep the input labels.
struct BeamSplitterParams {
    double theta = 0.0;
    double phi = 0.0;

    /// Parameters of the beam splitter that undoes this one.
    BeamSplitterParams inverse() const {
        return {-theta, phi};
    }
};

/// Cross-phase modulation exp(i phi_chi n m) between two modes;
/// phi_chi is the product of the coupling and the interaction time.
struct XpmParams {
    double phi_chi = 0.0;

    /// False when phi_chi is a multiple of 2 pi within `tol`, i.e. the
    /// interaction imprints no phase at all.
    bool is_working(double tol = 1e-9) const;
};

/// One complex amplitude per mode, for registers in which every mode is in
/// a coherent state.
struct CoherentAmplitudes {
    std::vector<Complex> values;

    double mean_photon_number() const;
};

using Matrix2 = std::array<std::array<Complex, 2>, 2>;

/// Substitution matrix U with (a1~^dag, a2~^dag)^T = U (a1'^dag, a2'^dag)^T.
Matrix2 beam_splitter_matrix(const BeamSplitterParams &p);

Matrix2 multiply(const Matrix2 &a, const Matrix2 &b);

/// Unitary of the beam splitter restricted to the subspace with `total`
/// photons in the two modes. Entry [k_out][k_in] couples |k_in, total-k_in>
/// to |k_out, total-k_out>.
std::vector<std::vector<Complex>> beam_splitter_block(const BeamSplitterParams &p, std::uint32_t total);

/// Applies the beam splitter to modes (first, second) of `ket`. Throws
/// CutoffError if redistributed photons do not fit the register; amplitude
/// is never dropped.
MultiModeKet apply_beam_splitter(const MultiModeKet &ket, ModeIndex first, ModeIndex second,
                                 const BeamSplitterParams &p);

/// Multiplies every amplitude by exp(i phi_chi n_first n_second).
MultiModeKet apply_xpm(const MultiModeKet &ket, ModeIndex first, ModeIndex second, const XpmParams &p);

/// Beam splitter acting on coherent amplitudes (the classical field path).
CoherentAmplitudes bs_coherent(const CoherentAmplitudes &amps, ModeIndex first, ModeIndex second,
                               const BeamSplitterParams &p);

/// XPM on a coherent mode whose partner holds a definite photon number of
/// one (`photon_present`) or zero.
CoherentAmplitudes xpm_coherent_branch(const CoherentAmplitudes &amps, ModeIndex mode, bool photon_present,
                                       const XpmParams &p);

}  // namespace xpmh

#endif
