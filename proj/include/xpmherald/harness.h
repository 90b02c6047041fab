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

#ifndef XPMHERALD_HARNESS_H
#define XPMHERALD_HARNESS_H

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xpmh::harness {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Row-major table of experiment results. Free-form notes are emitted with
/// the manifest block of the CSV.
class ResultTable {
   public:
    explicit ResultTable(std::vector<std::string> columns);

    const std::vector<std::string> &columns() const {
        return columns_;
    }
    const std::vector<std::vector<Cell>> &rows() const {
        return rows_;
    }
    const std::vector<std::string> &notes() const {
        return notes_;
    }

    /// Throws std::invalid_argument when the row width differs from the schema.
    void add_row(std::vector<Cell> row);
    void add_note(std::string note);

    /// Throws std::out_of_range for unknown columns.
    std::size_t column_index(std::string_view name) const;
    const Cell &at(std::size_t row, std::string_view column) const;
    double number(std::size_t row, std::string_view column) const;

    /// Rows whose `status` column reads "truncation_failure".
    std::size_t truncation_failures() const;

   private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::string> notes_;
};

/// Shortest round-trip form ("%.17g"); "nan", "inf", "-inf" for non-finite values.
std::string format_number(double value);

/// Resolved experiment description: every parameter grid is filled, either
/// from the config or from the experiment's defaults.
struct ExperimentConfig {
    std::string experiment;
    std::map<std::string, std::vector<double>> grids;
    std::map<std::string, std::string> choices;
    /// Grids that were not given and took the experiment default.
    std::set<std::string> defaulted;
    double trunc_tol = 1e-10;
    /// Largest probe Fock cutoff a row may use; rows needing more to reach
    /// `trunc_tol` are marked as truncation failures.
    std::optional<std::uint32_t> max_cutoff;
    std::optional<std::uint64_t> seed;
    std::uint64_t shots = 0;
    unsigned threads = 1;
    std::string out;

    /// Throws ConfigurationError for unknown grids.
    const std::vector<double> &grid(std::string_view name) const;
    const std::string &choice(std::string_view name) const;
    /// Canonical one-line JSON of everything that determines the output
    /// (threads and output path excluded).
    std::string canonical_json() const;
};

/// Command-line values that replace the corresponding config entries.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<double> trunc_tol;
    std::optional<unsigned> threads;
    std::optional<std::string> out;
};

/// Parses a JSON experiment file:
///
///   {
///     "experiment": "fig4",
///     "seed": 7, "shots": 100000, "trunc_tol": 1e-10, "max_cutoff": 200,
///     "threads": 2, "out": "fig4.csv",
///     "params": {
///       "phi_chi": {"start": 0, "stop": "2pi", "count": 65},
///       "beta_abs": [0.5, 1, 2],
///       "scheme": "many-sources"
///     }
///   }
///
/// A grid is a number, a list, or a {start, stop, count} range; numbers may
/// be written as strings with a multiple of pi ("pi/2", "3pi/4", "0.01").
/// Throws ConfigurationError prefixed with `origin:line:column` for syntax
/// errors and with the offending field path for semantic ones.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>",
                              const ConfigOverrides &overrides = {});
ExperimentConfig load_config(const std::string &path, const ConfigOverrides &overrides = {});

/// Reads "pi"-style numbers: "1.5", "pi", "-pi/4", "2pi", "0.5*pi".
std::optional<double> parse_number(std::string_view text);

struct ExperimentInfo {
    std::string name;
    std::string summary;
};
std::vector<ExperimentInfo> list_experiments();

/// Runs the named experiment. Points of a sweep are evaluated on
/// `cfg.threads` workers; rows are ordered by parameter order. Truncation
/// failures are recorded per row rather than thrown.
ResultTable run_experiment(const ExperimentConfig &cfg);

/// CSV with a leading `#` manifest block (tool version, experiment, seed,
/// config echo, notes). Bit-identical for identical configs and seeds.
std::string to_csv(const ExperimentConfig &cfg, const ResultTable &table);

/// Side-car run record with the wall-clock data that must stay out of the CSV.
std::string run_manifest_json(const ExperimentConfig &cfg, const ResultTable &table, double wall_seconds);

std::string_view version();

}  // namespace xpmh::harness

#endif
