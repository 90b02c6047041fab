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

#ifndef XPMHERALD_VERIFY_H
#define XPMHERALD_VERIFY_H

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xpmherald/optics.h"

namespace xpmh::harness {

enum class VerifySuite {
    kFast,  // small grids, well under a minute
    kFull,  // dense grids and 10^6-shot Monte Carlo
};

using BeamSplitterMatrixFn = std::function<Matrix2(const BeamSplitterParams &)>;

struct VerifyOptions {
    VerifySuite suite = VerifySuite::kFast;
    unsigned threads = 1;
    std::uint64_t seed = 0x5eed;
    /// Convention used by the empty-interferometer transparency checks.
    BeamSplitterMatrixFn beam_splitter = beam_splitter_matrix;
};

struct CheckResult {
    std::string module;
    std::string property;
    /// Parameters of the worst (or first failing) case.
    std::string params;
    std::string observed;
    std::string expected;
    bool passed = false;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    std::size_t failures() const;
};

VerifyReport verify(const VerifyOptions &options = {});

/// One line per check: "PASS|FAIL module: property [params] observed ... expected ...".
std::string format_report(const VerifyReport &report);

}  // namespace xpmh::harness

#endif
