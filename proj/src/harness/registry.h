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

#ifndef XPMHERALD_SRC_HARNESS_REGISTRY_H
#define XPMHERALD_SRC_HARNESS_REGISTRY_H

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "xpmherald/harness.h"

namespace xpmh::harness::internal {

struct GridSpec {
    std::string name;
    std::vector<double> defaults;
    double min = -std::numeric_limits<double>::infinity();
    double max = std::numeric_limits<double>::infinity();
    bool integer = false;
};

struct ChoiceSpec {
    std::string name;
    /// The first entry is the default.
    std::vector<std::string> allowed;
};

struct ExperimentSpec {
    std::string name;
    std::string summary;
    std::vector<GridSpec> grids;
    std::vector<ChoiceSpec> choices;
    /// Shot count used when the config gives none; 0 for deterministic experiments.
    std::uint64_t default_shots = 0;
    bool (*needs_seed)(const ExperimentConfig &) = nullptr;
    ResultTable (*run)(const ExperimentConfig &) = nullptr;
};

const std::vector<ExperimentSpec> &experiment_specs();
/// Null for unknown names.
const ExperimentSpec *find_experiment(std::string_view name);

}  // namespace xpmh::harness::internal

#endif
