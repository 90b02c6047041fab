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

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "xpmherald/errors.h"
#include "xpmherald/harness.h"

namespace xpmh::harness {

namespace {

std::string render(const Cell &cell) {
    if (const auto *d = std::get_if<double>(&cell)) {
        return format_number(*d);
    }
    if (const auto *i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    const auto &s = std::get<std::string>(cell);
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    return quoted + "\"";
}

}  // namespace

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) {
        throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, schema has " +
                                    std::to_string(columns_.size()));
    }
    rows_.push_back(std::move(row));
}

void ResultTable::add_note(std::string note) {
    notes_.push_back(std::move(note));
}

std::size_t ResultTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("no column named " + std::string(name));
}

const Cell &ResultTable::at(std::size_t row, std::string_view column) const {
    return rows_.at(row).at(column_index(column));
}

double ResultTable::number(std::size_t row, std::string_view column) const {
    const Cell &c = at(row, column);
    if (const auto *d = std::get_if<double>(&c)) {
        return *d;
    }
    if (const auto *i = std::get_if<std::int64_t>(&c)) {
        return static_cast<double>(*i);
    }
    throw std::invalid_argument("column " + std::string(column) + " is not numeric");
}

std::size_t ResultTable::truncation_failures() const {
    std::size_t status = 0;
    try {
        status = column_index("status");
    } catch (const std::out_of_range &) {
        return 0;
    }
    std::size_t n = 0;
    for (const auto &row : rows_) {
        const auto *s = std::get_if<std::string>(&row[status]);
        n += s != nullptr && *s == "truncation_failure";
    }
    return n;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string_view version() {
    return XPMHERALD_VERSION;
}

std::string to_csv(const ExperimentConfig &cfg, const ResultTable &table) {
    std::string out;
    out += "# xpmherald " + std::string(version()) + "\n";
    out += "# experiment: " + cfg.experiment + "\n";
    out += "# seed: " + (cfg.seed ? std::to_string(*cfg.seed) : std::string("none")) + "\n";
    out += "# config: " + cfg.canonical_json() + "\n";
    for (const auto &note : table.notes()) {
        out += "# note: " + note + "\n";
    }
    for (std::size_t i = 0; i < table.columns().size(); ++i) {
        out += (i ? "," : "") + table.columns()[i];
    }
    out += "\n";
    for (const auto &row : table.rows()) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += (i ? "," : "") + render(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string run_manifest_json(const ExperimentConfig &cfg, const ResultTable &table, double wall_seconds) {
    nlohmann::ordered_json j;
    j["version"] = version();
    j["experiment"] = cfg.experiment;
    j["config"] = nlohmann::json::parse(cfg.canonical_json());
    j["threads"] = cfg.threads;
    j["out"] = cfg.out;
    j["rows"] = table.rows().size();
    j["truncation_failures"] = table.truncation_failures();
    j["wall_seconds"] = wall_seconds;
    return j.dump(2) + "\n";
}

}  // namespace xpmh::harness
