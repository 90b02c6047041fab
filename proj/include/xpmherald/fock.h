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

#ifndef XPMHERALD_FOCK_H
#define XPMHERALD_FOCK_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace xpmh {

using Complex = std::complex<double>;

/// Photon numbers of every mode in a register, e.g. (n_A, n_B, n_C).
using Occupation = std::vector<std::uint32_t>;

/// Maximum retained photon number per mode.
using Cutoffs = std::vector<std::uint32_t>;

/// Position of a mode inside a register.
struct ModeIndex {
    constexpr explicit ModeIndex(std::size_t v) : value(v) {
    }
    std::size_t value;
};

/// How a coherent state is cut off in Fock space.
///
/// With no fixed cutoff the smallest n_max whose Poisson tail lies below
/// `tail_tolerance` is chosen. With a fixed cutoff the tail must still be
/// below the tolerance, otherwise construction fails.
struct TruncationPolicy {
    double tail_tolerance = 1e-10;
    std::optional<std::uint32_t> fixed_cutoff;

    static TruncationPolicy automatic(double tail_tolerance);
    static TruncationPolicy fixed(std::uint32_t n_max, double tail_tolerance);

    /// Throws ConfigurationError unless 0 < tail_tolerance < 1.
    void validate() const;
};

/// Sparse ket over a truncated multimode Fock basis.
///
/// Amplitudes are stored in a map keyed by occupation tuple, so iteration
/// order is deterministic. A ket may be sub-normalized: `truncation_deficit`
/// records the probability mass known to be missing because of truncation.
class MultiModeKet {
   public:
    using Terms = std::map<Occupation, Complex>;

    MultiModeKet() = default;
    /// The zero ket on a register with the given cutoffs.
    explicit MultiModeKet(Cutoffs cutoffs);

    std::size_t num_modes() const {
        return cutoffs_.size();
    }
    const Cutoffs &cutoffs() const {
        return cutoffs_;
    }
    const Terms &terms() const {
        return terms_;
    }
    double truncation_deficit() const {
        return deficit_;
    }

    Complex amplitude(const Occupation &occupation) const;

    /// Adds `value` to the amplitude of `occupation`. Throws CutoffError if
    /// the tuple does not fit the register.
    void add(const Occupation &occupation, Complex value);

    void set_truncation_deficit(double deficit);

    /// Squared norm <k|k>.
    double norm2() const;

    /// Copy with every amplitude multiplied by `factor`.
    MultiModeKet scaled(Complex factor) const;

    /// Copy on a register with larger cutoffs. Throws CutoffError if any new
    /// cutoff is smaller than the current one.
    MultiModeKet with_cutoffs(const Cutoffs &cutoffs) const;

    /// Removes amplitudes whose magnitude is at most `threshold`.
    void prune(double threshold);

   private:
    void check_fits(const Occupation &occupation) const;

    Cutoffs cutoffs_;
    Terms terms_;
    double deficit_ = 0.0;
};

/// One component of a mixed state: probability `weight` of pure state `ket`.
struct Branch {
    double weight;
    MultiModeKet ket;
};

/// Mixed state held as a weighted list of pure kets.
struct Ensemble {
    std::vector<Branch> branches;

    double total_weight() const;
    /// Sum of weight * truncation deficit over branches.
    double truncation_deficit() const;
    /// Throws ConfigurationError on negative weights or mismatched registers.
    void validate() const;
};

enum class DetectorEvent {
    kZero,
    kAtLeastOne,
};

struct ConditionedEnsemble {
    double probability;
    Ensemble state;
};

/// Fock basis ket |n_1, ..., n_M>.
MultiModeKet make_fock(const Occupation &occupation, const Cutoffs &cutoffs);

MultiModeKet make_vacuum(const Cutoffs &cutoffs);

/// Single-mode truncated coherent state |beta>. The ket is not renormalized;
/// its truncation deficit is the Poisson tail beyond the cutoff.
MultiModeKet make_coherent(Complex beta, const TruncationPolicy &policy);

/// Poisson tail sum_{n > n_max} e^{-mean} mean^n / n!.
double poisson_tail(double mean, std::uint32_t n_max);

/// Smallest n_max whose Poisson tail is below `tail_tolerance`.
std::uint32_t coherent_cutoff(double mean, double tail_tolerance);

/// Tensor product in register order.
MultiModeKet tensor(std::span<const MultiModeKet> kets);
MultiModeKet tensor(const MultiModeKet &a, const MultiModeKet &b);

/// <a|b>, conjugate-linear in `a`. Throws ModeMismatchError if the two kets
/// do not share a register.
Complex inner(const MultiModeKet &a, const MultiModeKet &b);

/// Photon-number distribution of one mode, normalized by <k|k>.
std::vector<double> mode_number_distribution(const MultiModeKet &ket, ModeIndex mode);

/// Projects `ket` onto the subspace where `mode` satisfies `event`.
MultiModeKet project(const MultiModeKet &ket, ModeIndex mode, DetectorEvent event);

/// Probability of `event` on `mode` and the renormalized post-measurement
/// ensemble. Throws ConditioningError when the event has probability zero.
ConditionedEnsemble condition(const Ensemble &ensemble, ModeIndex mode, DetectorEvent event);

/// |<a|b>|^2 / (<a|a><b|b>).
double fidelity(const MultiModeKet &a, const MultiModeKet &b);

/// Largest amplitude difference over the union of both supports.
double max_amplitude_distance(const MultiModeKet &a, const MultiModeKet &b);

/// Equality up to a global phase: |<a|b>| >= (1 - tol) |a| |b|.
bool equal_up_to_global_phase(const MultiModeKet &a, const MultiModeKet &b, double tol);

}  // namespace xpmh

#endif
