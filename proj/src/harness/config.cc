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

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "registry.h"
#include "xpmherald/errors.h"
#include "xpmherald/harness.h"

namespace xpmh::harness {

namespace {

using nlohmann::json;
using internal::ExperimentSpec;
using internal::GridSpec;

constexpr std::size_t kMaxGridCount = 1000000;

struct LineColumn {
    std::size_t line = 1;
    std::size_t column = 1;
};

LineColumn locate_offset(std::string_view text, std::size_t offset) {
    LineColumn lc;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++lc.line;
            lc.column = 1;
        } else {
            ++lc.column;
        }
    }
    return lc;
}

class Reader {
   public:
    Reader(std::string_view text, std::string_view origin) : text_(text), origin_(origin) {
    }

    [[noreturn]] void fail(const std::vector<std::string> &path, const std::string &message) const {
        std::string dotted;
        for (const auto &p : path) {
            dotted += (dotted.empty() || p.front() == '[' ? "" : ".") + p;
        }
        std::string where(origin_);
        if (auto line = line_of(path)) {
            where += ":" + std::to_string(*line);
        }
        throw ConfigurationError(where + ": field '" + dotted + "': " + message);
    }

    double number(const json &j, const std::vector<std::string> &path) const {
        if (j.is_number()) {
            return j.get<double>();
        }
        if (j.is_string()) {
            if (auto v = parse_number(j.get<std::string>())) {
                return *v;
            }
        }
        fail(path, "expected a number or a multiple of pi such as \"pi/2\", got " + j.dump());
    }

    std::vector<double> grid(const json &j, const GridSpec &spec, std::vector<std::string> path) const {
        std::vector<double> values;
        if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) {
                auto p = path;
                p.push_back("[" + std::to_string(i) + "]");
                values.push_back(number(j[i], p));
            }
        } else if (j.is_object()) {
            for (const auto &[key, _] : j.items()) {
                if (key != "start" && key != "stop" && key != "count") {
                    auto p = path;
                    p.push_back(key);
                    fail(p, "unknown range key; use start, stop and count");
                }
            }
            for (const char *key : {"start", "stop", "count"}) {
                if (!j.contains(key)) {
                    fail(path, std::string("range needs '") + key + "'");
                }
            }
            auto with = [&](const char *key) {
                auto p = path;
                p.push_back(key);
                return p;
            };
            double start = number(j["start"], with("start"));
            double stop = number(j["stop"], with("stop"));
            const json &count = j["count"];
            if (!count.is_number_unsigned() || count.get<std::uint64_t>() < 1 ||
                count.get<std::uint64_t>() > kMaxGridCount) {
                fail(with("count"), "expected an integer in [1, " + std::to_string(kMaxGridCount) + "]");
            }
            auto n = count.get<std::size_t>();
            for (std::size_t i = 0; i < n; ++i) {
                values.push_back(n == 1 ? start : start + (stop - start) * static_cast<double>(i) / (n - 1));
            }
        } else {
            values.push_back(number(j, path));
        }
        if (values.empty()) {
            fail(path, "grid is empty");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            double v = values[i];
            auto p = path;
            if (j.is_array()) {
                p.push_back("[" + std::to_string(i) + "]");
            }
            if (!std::isfinite(v)) {
                fail(p, "value must be finite");
            }
            if (v < spec.min || v > spec.max) {
                fail(p, "value " + format_number(v) + " outside [" + format_number(spec.min) + ", " +
                            format_number(spec.max) + "]");
            }
            if (spec.integer && v != std::floor(v)) {
                fail(p, "expected an integer, got " + format_number(v));
            }
        }
        return values;
    }

   private:
    // Best-effort line lookup: follows the quoted keys of `path` in order.
    std::optional<std::size_t> line_of(const std::vector<std::string> &path) const {
        std::size_t pos = 0;
        bool found = false;
        for (const auto &key : path) {
            if (key.front() == '[') {
                continue;
            }
            auto hit = text_.find("\"" + key + "\"", pos);
            if (hit == std::string_view::npos) {
                break;
            }
            pos = hit;
            found = true;
        }
        if (!found) {
            return std::nullopt;
        }
        return locate_offset(text_, pos).line;
    }

    std::string_view text_;
    std::string_view origin_;
};

}  // namespace

std::optional<double> parse_number(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
            s.remove_prefix(1);
        }
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
            s.remove_suffix(1);
        }
        return s;
    };
    auto read_double = [](std::string_view s, double &out) {
        if (!s.empty() && s.front() == '+') {
            s.remove_prefix(1);
        }
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && end == s.data() + s.size();
    };
    std::string_view s = trim(text);
    if (s.empty()) {
        return std::nullopt;
    }
    std::string_view head = s;
    std::string_view denominator;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        head = trim(s.substr(0, slash));
        denominator = trim(s.substr(slash + 1));
        if (denominator.empty()) {
            return std::nullopt;
        }
    }
    double value = 1.0;
    auto pi_at = head.rfind("pi");
    if (pi_at != std::string_view::npos && pi_at + 2 == head.size()) {
        std::string_view coeff = trim(head.substr(0, pi_at));
        if (!coeff.empty() && coeff.back() == '*') {
            coeff = trim(coeff.substr(0, coeff.size() - 1));
            if (coeff.empty()) {
                return std::nullopt;
            }
        }
        if (coeff == "-") {
            value = -1.0;
        } else if (!coeff.empty() && coeff != "+" && !read_double(coeff, value)) {
            return std::nullopt;
        }
        value *= std::numbers::pi;
    } else if (!read_double(head, value)) {
        return std::nullopt;
    }
    if (!denominator.empty()) {
        double d = 0.0;
        if (!read_double(denominator, d) || d == 0.0) {
            return std::nullopt;
        }
        value /= d;
    }
    return value;
}

const std::vector<double> &ExperimentConfig::grid(std::string_view name) const {
    auto it = grids.find(std::string(name));
    if (it == grids.end()) {
        throw ConfigurationError("experiment " + experiment + " has no parameter " + std::string(name));
    }
    return it->second;
}

const std::string &ExperimentConfig::choice(std::string_view name) const {
    auto it = choices.find(std::string(name));
    if (it == choices.end()) {
        throw ConfigurationError("experiment " + experiment + " has no option " + std::string(name));
    }
    return it->second;
}

std::string ExperimentConfig::canonical_json() const {
    json j;
    j["experiment"] = experiment;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["shots"] = shots;
    j["trunc_tol"] = trunc_tol;
    j["max_cutoff"] = max_cutoff ? json(*max_cutoff) : json(nullptr);
    json params = json::object();
    for (const auto &[name, values] : grids) {
        params[name] = values;
    }
    for (const auto &[name, value] : choices) {
        params[name] = value;
    }
    j["params"] = params;
    return j.dump();
}

ExperimentConfig parse_config(std::string_view text, std::string_view origin, const ConfigOverrides &overrides) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        LineColumn lc = locate_offset(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        auto colon = what.rfind(": ");
        throw ConfigurationError(std::string(origin) + ":" + std::to_string(lc.line) + ":" +
                                 std::to_string(lc.column) + ": invalid JSON: " +
                                 (colon == std::string::npos ? what : what.substr(colon + 2)));
    }
    Reader r(text, origin);
    if (!root.is_object()) {
        throw ConfigurationError(std::string(origin) + ": the config must be a JSON object");
    }
    for (const auto &[key, _] : root.items()) {
        static const std::set<std::string> kKnown{"experiment", "seed",    "shots", "trunc_tol",
                                                  "max_cutoff", "threads", "out",   "params"};
        if (!kKnown.contains(key)) {
            r.fail({key}, "unknown key");
        }
    }
    if (!root.contains("experiment") || !root["experiment"].is_string()) {
        r.fail({"experiment"}, "missing experiment name");
    }
    ExperimentConfig cfg;
    cfg.experiment = root["experiment"].get<std::string>();
    const ExperimentSpec *spec = internal::find_experiment(cfg.experiment);
    if (spec == nullptr) {
        std::string names;
        for (const auto &e : internal::experiment_specs()) {
            names += (names.empty() ? "" : ", ") + e.name;
        }
        r.fail({"experiment"}, "unknown experiment '" + cfg.experiment + "'; known: " + names);
    }
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) {
            r.fail({"seed"}, "expected an unsigned 64-bit integer");
        }
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    cfg.shots = spec->default_shots;
    if (root.contains("shots")) {
        if (!root["shots"].is_number_unsigned() || root["shots"].get<std::uint64_t>() == 0) {
            r.fail({"shots"}, "expected a positive integer");
        }
        cfg.shots = root["shots"].get<std::uint64_t>();
    }
    if (root.contains("trunc_tol")) {
        double t = r.number(root["trunc_tol"], {"trunc_tol"});
        if (!(t > 0.0 && t < 1.0)) {
            r.fail({"trunc_tol"}, "expected a value in (0, 1)");
        }
        cfg.trunc_tol = t;
    }
    if (root.contains("max_cutoff")) {
        const json &m = root["max_cutoff"];
        if (!m.is_number_unsigned() || m.get<std::uint64_t>() < 1 || m.get<std::uint64_t>() > 100000) {
            r.fail({"max_cutoff"}, "expected an integer in [1, 100000]");
        }
        cfg.max_cutoff = m.get<std::uint32_t>();
    }
    if (root.contains("threads")) {
        if (!root["threads"].is_number_unsigned() || root["threads"].get<std::uint64_t>() == 0 ||
            root["threads"].get<std::uint64_t>() > 1024) {
            r.fail({"threads"}, "expected an integer in [1, 1024]");
        }
        cfg.threads = root["threads"].get<unsigned>();
    }
    if (root.contains("out")) {
        if (!root["out"].is_string()) {
            r.fail({"out"}, "expected a path string");
        }
        cfg.out = root["out"].get<std::string>();
    }
    json params = root.contains("params") ? root["params"] : json::object();
    if (!params.is_object()) {
        r.fail({"params"}, "expected an object");
    }
    for (const auto &[key, value] : params.items()) {
        bool known = false;
        for (const auto &g : spec->grids) {
            known |= g.name == key;
        }
        for (const auto &c : spec->choices) {
            known |= c.name == key;
        }
        if (!known) {
            std::string names;
            for (const auto &g : spec->grids) {
                names += (names.empty() ? "" : ", ") + g.name;
            }
            for (const auto &c : spec->choices) {
                names += (names.empty() ? "" : ", ") + c.name;
            }
            r.fail({"params", key}, "not a parameter of " + cfg.experiment + "; known: " + names);
        }
    }
    for (const auto &g : spec->grids) {
        if (params.contains(g.name)) {
            cfg.grids[g.name] = r.grid(params[g.name], g, {"params", g.name});
        } else {
            cfg.grids[g.name] = g.defaults;
            cfg.defaulted.insert(g.name);
        }
    }
    for (const auto &c : spec->choices) {
        std::string value = c.allowed.front();
        if (params.contains(c.name)) {
            const json &v = params[c.name];
            bool ok = v.is_string();
            if (ok) {
                value = v.get<std::string>();
                ok = std::find(c.allowed.begin(), c.allowed.end(), value) != c.allowed.end();
            }
            if (!ok) {
                std::string allowed;
                for (const auto &a : c.allowed) {
                    allowed += (allowed.empty() ? "" : ", ") + a;
                }
                r.fail({"params", c.name}, "expected one of " + allowed + ", got " + v.dump());
            }
        }
        cfg.choices[c.name] = value;
    }
    if (overrides.seed) {
        cfg.seed = overrides.seed;
    }
    if (overrides.shots) {
        if (*overrides.shots == 0) {
            throw ConfigurationError("--shots: expected a positive integer");
        }
        cfg.shots = *overrides.shots;
    }
    if (overrides.trunc_tol) {
        if (!(*overrides.trunc_tol > 0.0 && *overrides.trunc_tol < 1.0)) {
            throw ConfigurationError("--trunc-tol: expected a value in (0, 1)");
        }
        cfg.trunc_tol = *overrides.trunc_tol;
    }
    if (overrides.threads) {
        if (*overrides.threads == 0 || *overrides.threads > 1024) {
            throw ConfigurationError("--threads: expected an integer in [1, 1024]");
        }
        cfg.threads = *overrides.threads;
    }
    if (overrides.out) {
        cfg.out = *overrides.out;
    }
    if (spec->needs_seed != nullptr && spec->needs_seed(cfg)) {
        if (!cfg.seed) {
            r.fail({"seed"}, "a seed is required (set seed or pass --seed) because " + cfg.experiment + " samples shots");
        }
        if (cfg.shots == 0) {
            r.fail({"shots"}, "a shot count is required because " + cfg.experiment + " samples shots");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string &path, const ConfigOverrides &overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigurationError(path + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path, overrides);
}

}  // namespace xpmh::harness
