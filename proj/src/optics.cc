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

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "xpmherald/errors.h"

namespace xpmh {

namespace {

// Contributions smaller than this that land outside the register are
// rounding noise of sin/cos at multiples of pi/2, not physical amplitude.
constexpr double kNumericalZero = 1e-13;
// Eigendecomposition round-off; far below any tolerance in use.
constexpr double kDropBelow = 1e-18;

void check_pair(const MultiModeKet &ket, ModeIndex first, ModeIndex second) {
    if (first.value >= ket.num_modes() || second.value >= ket.num_modes()) {
        throw ModeMismatchError("mode index out of range for a " + std::to_string(ket.num_modes()) +
                                "-mode register");
    }
    if (first.value == second.value) {
        throw ModeMismatchError("two-mode element applied to a single mode");
    }
}

void check_pair(const CoherentAmplitudes &amps, ModeIndex first, ModeIndex second) {
    if (first.value >= amps.values.size() || second.value >= amps.values.size() ||
        first.value == second.value) {
        throw ModeMismatchError("invalid mode pair for coherent amplitudes");
    }
}

}  // namespace

bool XpmParams::is_working(double tol) const {
    double r = std::remainder(phi_chi, 2 * std::numbers::pi);
    return std::abs(r) > tol;
}

double CoherentAmplitudes::mean_photon_number() const {
    double total = 0.0;
    for (auto a : values) {
        total += std::norm(a);
    }
    return total;
}

Matrix2 beam_splitter_matrix(const BeamSplitterParams &p) {
    double c = std::cos(p.theta);
    double s = std::sin(p.theta);
    return {{{c, std::polar(s, -p.phi)}, {-std::polar(s, p.phi), c}}};
}

Matrix2 multiply(const Matrix2 &a, const Matrix2 &b) {
    Matrix2 out{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    return out;
}

std::vector<std::vector<Complex>> beam_splitter_block(const BeamSplitterParams &p, std::uint32_t total) {
    // U = exp(theta H) with H = e^{-i phi} a2^dag a1 - e^{i phi} a1^dag a2. The
    // Hermitian K = iH is tridiagonal on |k, N-k> with spectrum -N, -N+2, ..., N,
    // so the eigendecomposition is well conditioned for every photon number.
    const Eigen::Index dim = Eigen::Index{total} + 1;
    if (std::sin(p.theta) == 0.0) {
        std::vector<std::vector<Complex>> diag(dim, std::vector<Complex>(dim));
        for (Eigen::Index r = 0; r < dim; ++r) {
            diag[r][r] = std::pow(std::cos(p.theta), static_cast<double>(total));
        }
        return diag;
    }
    Eigen::MatrixXcd k_mat = Eigen::MatrixXcd::Zero(dim, dim);
    const Complex i_unit{0.0, 1.0};
    for (Eigen::Index k = 0; k + 1 < dim; ++k) {
        double coupling = std::sqrt(static_cast<double>(k + 1) * static_cast<double>(total - k));
        k_mat(k, k + 1) = i_unit * std::polar(coupling, -p.phi);
        k_mat(k + 1, k) = std::conj(k_mat(k, k + 1));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(k_mat);
    const auto &vecs = solver.eigenvectors();
    Eigen::VectorXcd phases(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        phases(j) = std::polar(1.0, -p.theta * solver.eigenvalues()(j));
    }
    Eigen::MatrixXcd u = vecs * phases.asDiagonal() * vecs.adjoint();

    std::vector<std::vector<Complex>> block(dim, std::vector<Complex>(dim));
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            block[r][c] = u(r, c);
        }
    }
    return block;
}

MultiModeKet apply_beam_splitter(const MultiModeKet &ket, ModeIndex first, ModeIndex second,
                                 const BeamSplitterParams &p) {
    check_pair(ket, first, second);
    std::uint32_t max_total = 0;
    for (const auto &[occ, amp] : ket.terms()) {
        max_total = std::max(max_total, occ[first.value] + occ[second.value]);
    }
    std::vector<std::vector<std::vector<Complex>>> blocks;
    blocks.reserve(max_total + 1);
    for (std::uint32_t n = 0; n <= max_total; ++n) {
        blocks.push_back(beam_splitter_block(p, n));
    }

    const auto cap_first = ket.cutoffs()[first.value];
    const auto cap_second = ket.cutoffs()[second.value];
    MultiModeKet out(ket.cutoffs());
    for (const auto &[occ, amp] : ket.terms()) {
        std::uint32_t n_in = occ[first.value];
        std::uint32_t total = n_in + occ[second.value];
        const auto &block = blocks[total];
        Occupation target = occ;
        for (std::uint32_t k = 0; k <= total; ++k) {
            Complex v = amp * block[k][n_in];
            if (std::abs(v) <= kDropBelow) {
                continue;
            }
            if (k > cap_first || total - k > cap_second) {
                if (std::abs(v) > kNumericalZero) {
                    throw CutoffError("beam splitter sends " + std::to_string(k) + "/" +
                                      std::to_string(total - k) + " photons into modes " +
                                      std::to_string(first.value) + "/" + std::to_string(second.value) +
                                      " with cutoffs " + std::to_string(cap_first) + "/" +
                                      std::to_string(cap_second));
                }
                continue;
            }
            target[first.value] = k;
            target[second.value] = total - k;
            out.add(target, v);
        }
    }
    out.set_truncation_deficit(ket.truncation_deficit());
    return out;
}

MultiModeKet apply_xpm(const MultiModeKet &ket, ModeIndex first, ModeIndex second, const XpmParams &p) {
    check_pair(ket, first, second);
    MultiModeKet out(ket.cutoffs());
    for (const auto &[occ, amp] : ket.terms()) {
        double photons = static_cast<double>(occ[first.value]) * occ[second.value];
        out.add(occ, photons == 0.0 ? amp : amp * std::polar(1.0, p.phi_chi * photons));
    }
    out.set_truncation_deficit(ket.truncation_deficit());
    return out;
}

CoherentAmplitudes bs_coherent(const CoherentAmplitudes &amps, ModeIndex first, ModeIndex second,
                               const BeamSplitterParams &p) {
    check_pair(amps, first, second);
    // Displacements transform like the creation operators they multiply.
    Matrix2 u = beam_splitter_matrix(p);
    Complex a = amps.values[first.value];
    Complex b = amps.values[second.value];
    CoherentAmplitudes out = amps;
    out.values[first.value] = u[0][0] * a + u[1][0] * b;
    out.values[second.value] = u[0][1] * a + u[1][1] * b;
    return out;
}

CoherentAmplitudes xpm_coherent_branch(const CoherentAmplitudes &amps, ModeIndex mode, bool photon_present,
                                       const XpmParams &p) {
    if (mode.value >= amps.values.size()) {
        throw ModeMismatchError("mode index out of range for coherent amplitudes");
    }
    CoherentAmplitudes out = amps;
    if (photon_present) {
        out.values[mode.value] *= std::polar(1.0, p.phi_chi);
    }
    return out;
}

}  // namespace xpmh
