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

#include "xpmherald/harness.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "xpmherald/errors.h"
#include "xpmherald/mzi.h"
#include "xpmherald/verify.h"

using namespace xpmh;
using namespace xpmh::harness;
using std::numbers::pi;

namespace {

std::string config_error(std::string_view text, const ConfigOverrides &o = {}) {
    try {
        parse_config(text, "cfg.json", o);
    } catch (const ConfigurationError &e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(harness, format_number_round_trips) {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, pi}) {
        EXPECT_EQ(std::stod(format_number(v)), v);
    }
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(format_number(-INFINITY), "-inf");
    EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(harness, parse_number_reads_pi_multiples) {
    EXPECT_DOUBLE_EQ(*parse_number("pi"), pi);
    EXPECT_DOUBLE_EQ(*parse_number("-pi/4"), -pi / 4);
    EXPECT_DOUBLE_EQ(*parse_number("2pi"), 2 * pi);
    EXPECT_DOUBLE_EQ(*parse_number(" 0.5 * pi "), pi / 2);
    EXPECT_DOUBLE_EQ(*parse_number("3pi/4"), 3 * pi / 4);
    EXPECT_DOUBLE_EQ(*parse_number("1e-2"), 0.01);
    EXPECT_DOUBLE_EQ(*parse_number("+3"), 3.0);
    EXPECT_DOUBLE_EQ(*parse_number("1/8"), 0.125);
    for (const char *bad : {"", "pie", "p", "*pi", "1/0", "pi/", "two", "1..2"}) {
        EXPECT_FALSE(parse_number(bad).has_value()) << bad;
    }
}

TEST(harness, result_table_checks_width_and_columns) {
    ResultTable t({"a", "b", "status"});
    t.add_row({1.0, std::int64_t{2}, std::string("ok")});
    EXPECT_THROW(t.add_row({1.0}), std::invalid_argument);
    EXPECT_EQ(t.number(0, "b"), 2.0);
    EXPECT_THROW(t.number(0, "status"), std::invalid_argument);
    EXPECT_THROW(t.column_index("c"), std::out_of_range);
    t.add_row({1.0, 1.0, std::string("truncation_failure")});
    EXPECT_EQ(t.truncation_failures(), 1u);
}

TEST(harness, config_fills_defaults_and_ranges) {
    auto cfg = parse_config(R"({"experiment": "fig4", "params": {"phi_chi": {"start": 0, "stop": "2pi", "count": 5}}})");
    EXPECT_EQ(cfg.grid("phi_chi").size(), 5u);
    EXPECT_DOUBLE_EQ(cfg.grid("phi_chi")[4], 2 * pi);
    EXPECT_EQ(cfg.grid("beta_abs"), (std::vector<double>{0.5, 1.0, 2.0}));
    EXPECT_TRUE(cfg.defaulted.contains("beta_abs"));
    EXPECT_FALSE(cfg.defaulted.contains("phi_chi"));
    EXPECT_FALSE(cfg.seed.has_value());
    EXPECT_EQ(cfg.trunc_tol, 1e-10);

    auto scalar = parse_config(R"({"experiment": "loss-bounds", "params": {"beta_sq": 100}})");
    EXPECT_EQ(scalar.grid("beta_sq"), std::vector<double>{100.0});
}

TEST(harness, config_errors_name_line_and_field) {
    std::string text = "{\n  \"experiment\": \"fig4\",\n  \"params\": {\n    \"beta_abs\": [1, -2]\n  }\n}";
    std::string msg = config_error(text);
    EXPECT_NE(msg.find("cfg.json:4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("params.beta_abs[1]"), std::string::npos) << msg;

    msg = config_error("{\n\"experiment\": \"fig4\",\n\"params\": {\"phi_chi\": [1,}\n}");
    EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
    EXPECT_NE(msg.find("invalid JSON"), std::string::npos) << msg;

    EXPECT_NE(config_error(R"({"experiment": "nope"})").find("unknown experiment"), std::string::npos);
    EXPECT_NE(config_error(R"({"experiment": "fig4", "sed": 1})").find("'sed'"), std::string::npos);
    EXPECT_NE(config_error(R"({"experiment": "fig4", "params": {"p_B": [1]}})").find("params.p_B"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"experiment": "fig4", "params": {"beta_abs": []}})").find("empty"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"experiment": "cascade", "params": {"n_setups": 2.5}})").find("integer"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"experiment": "cascade", "params": {"scheme": "other"}})").find("reuse-coherent"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"experiment": "fig4", "trunc_tol": 0})").find("trunc_tol"), std::string::npos);
    EXPECT_NE(config_error("[1, 2]").find("JSON object"), std::string::npos);
}

TEST(harness, sampling_requires_seed) {
    EXPECT_NE(config_error(R"({"experiment": "purity-audit"})").find("'seed'"), std::string::npos);
    auto cfg = parse_config(R"({"experiment": "purity-audit"})", "cfg", ConfigOverrides{.seed = 9});
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.shots, 100000u);
    EXPECT_NO_THROW(parse_config(R"({"experiment": "cascade"})"));
    EXPECT_NE(config_error(R"({"experiment": "cascade", "params": {"mode": "monte-carlo"}})").find("seed"),
              std::string::npos);
}

TEST(harness, overrides_replace_file_values) {
    ConfigOverrides o{.seed = 4, .shots = 10, .trunc_tol = 1e-8, .threads = 3, .out = "x.csv"};
    auto cfg = parse_config(R"({"experiment": "purity-audit", "seed": 1, "threads": 1, "out": "y.csv"})", "c", o);
    EXPECT_EQ(cfg.seed, 4u);
    EXPECT_EQ(cfg.shots, 10u);
    EXPECT_EQ(cfg.trunc_tol, 1e-8);
    EXPECT_EQ(cfg.threads, 3u);
    EXPECT_EQ(cfg.out, "x.csv");
    EXPECT_THROW(parse_config(R"({"experiment": "fig4"})", "c", ConfigOverrides{.threads = 0}), ConfigurationError);
}

TEST(harness, fig4_matches_closed_form_and_flags_defaults) {
    auto cfg = parse_config(R"({"experiment": "fig4", "params": {"phi_chi": {"start": 0, "stop": "2pi", "count": 9}}})");
    auto table = run_experiment(cfg);
    ASSERT_EQ(table.rows().size(), 27u);
    for (std::size_t r = 0; r < table.rows().size(); ++r) {
        double beta = table.number(r, "beta_abs");
        double phi = table.number(r, "phi_chi");
        double expected = 1.0 - std::exp(-beta * beta * std::pow(std::sin(phi / 2), 2));
        EXPECT_NEAR(table.number(r, "p_click"), expected, 1e-8 + table.number(r, "truncation_deficit"));
        EXPECT_GE(table.number(r, "truncation_deficit"), 0.0);
    }
    // Parameter order: beta_abs outermost, then phi_chi.
    EXPECT_EQ(table.number(0, "beta_abs"), 0.5);
    EXPECT_EQ(table.number(1, "phi_chi"), 2 * pi / 8);
    std::string csv = to_csv(cfg, table);
    EXPECT_NE(csv.find("not authoritative"), std::string::npos);

    auto explicit_cfg = parse_config(R"({"experiment": "fig4", "params": {"beta_abs": [1], "phi_chi": [1]}})");
    EXPECT_EQ(to_csv(explicit_cfg, run_experiment(explicit_cfg)).find("not authoritative"), std::string::npos);
}

TEST(harness, csv_layout) {
    auto cfg = parse_config(R"({"experiment": "loss-bounds", "params": {"phi_chi": "pi", "beta_sq": 100}})");
    auto table = run_experiment(cfg);
    std::string csv = to_csv(cfg, table);
    EXPECT_EQ(csv.rfind("# xpmherald ", 0), 0u);
    EXPECT_NE(csv.find("# config: {\"experiment\":\"loss-bounds\""), std::string::npos);
    EXPECT_NE(csv.find("\nphi_chi,beta_sq,p_A,criterion,p_absorb_max,reference_p_absorb_max,deviation,"),
              std::string::npos);
    EXPECT_NEAR(table.number(0, "p_absorb_max"), 0.362393, 2e-6);
    EXPECT_NEAR(table.number(0, "deviation"), table.number(0, "p_absorb_max") - 0.35, 1e-15);
}

TEST(harness, output_is_independent_of_thread_count) {
    auto base = R"({"experiment": "purity-audit", "seed": 77, "shots": 20000,
                    "params": {"p_A": [0.2, 0.9], "probe_param": [0.5, 1]}})";
    auto one = parse_config(base, "c", ConfigOverrides{.threads = 1});
    auto four = parse_config(base, "c", ConfigOverrides{.threads = 4});
    std::string a = to_csv(one, run_experiment(one));
    EXPECT_EQ(a, to_csv(four, run_experiment(four)));
    EXPECT_EQ(a, to_csv(one, run_experiment(one)));
    auto other = parse_config(base, "c", ConfigOverrides{.seed = 78});
    EXPECT_NE(a, to_csv(other, run_experiment(other)));
}

TEST(harness, purity_audit_counts_no_false_heralds) {
    auto cfg = parse_config(R"({"experiment": "purity-audit", "seed": 1, "params": {"probe": "coherent",
                                "probe_param": [0.5, 2]}})");
    auto table = run_experiment(cfg);
    for (std::size_t r = 0; r < table.rows().size(); ++r) {
        EXPECT_EQ(table.number(r, "click_no_photon"), 0.0);
        EXPECT_EQ(table.number(r, "shots"), 100000.0);
        EXPECT_EQ(table.number(r, "seed"), 1.0 + r);
        EXPECT_NEAR(table.number(r, "click_rate"), table.number(r, "click_rate_expected"),
                    4 * table.number(r, "sigma"));
    }
}

TEST(harness, truncation_failures_are_marked_per_row) {
    auto cfg = parse_config(R"({"experiment": "fig4", "max_cutoff": 8, "params": {"beta_abs": [0.5, 2], "phi_chi": 1}})");
    auto table = run_experiment(cfg);
    ASSERT_EQ(table.rows().size(), 2u);
    EXPECT_EQ(std::get<std::string>(table.at(0, "status")), "ok");
    EXPECT_EQ(std::get<std::string>(table.at(1, "status")), "truncation_failure");
    EXPECT_TRUE(std::isnan(table.number(1, "p_click")));
    EXPECT_EQ(table.truncation_failures(), 1u);
}

TEST(harness, cascade_experiment_matches_closed_form) {
    auto cfg = parse_config(R"({"experiment": "cascade", "params": {"scheme": "many-sources", "n_setups": 6}})");
    auto table = run_experiment(cfg);
    ASSERT_EQ(table.rows().size(), 6u);
    for (std::size_t r = 0; r < 6; ++r) {
        EXPECT_LE(table.number(r, "abs_error"), 1e-12);
    }
    auto mc = parse_config(
        R"({"experiment": "cascade", "seed": 3, "shots": 50000, "params": {"mode": "monte-carlo", "n_setups": 3}})");
    auto mct = run_experiment(mc);
    for (std::size_t r = 0; r < 3; ++r) {
        EXPECT_LE(mct.number(r, "abs_error"), 4 * mct.number(r, "sigma") + 1e-4);
        EXPECT_EQ(mct.number(r, "shots"), 50000.0);
    }
}

TEST(harness, every_probability_lies_in_unit_interval) {
    auto cfg = parse_config(R"({"experiment": "noisy-grid", "params": {"p_B": [0, 0.5, 1]}})");
    auto table = run_experiment(cfg);
    for (std::size_t r = 0; r < table.rows().size(); ++r) {
        for (const char *col : {"p_click", "p_click_closed_form"}) {
            EXPECT_GE(table.number(r, col), 0.0);
            EXPECT_LE(table.number(r, col), 1.0);
        }
        EXPECT_LE(table.number(r, "abs_error"), 1e-10);
    }
}

TEST(verify, fast_suite_passes) {
    auto report = verify();
    EXPECT_TRUE(report.passed()) << format_report(report);
    EXPECT_GE(report.checks.size(), 15u);
}

TEST(verify, flipped_beam_splitter_sign_fails_transparency) {
    VerifyOptions o;
    // Phase sign flipped in the second row of the substitution matrix.
    o.beam_splitter = [](const BeamSplitterParams &p) {
        Matrix2 m = beam_splitter_matrix(p);
        m[1][0] = -m[0][1];
        return m;
    };
    auto report = verify(o);
    EXPECT_FALSE(report.passed());
    bool named = false;
    for (const auto &c : report.checks) {
        if (!c.passed) {
            EXPECT_EQ(c.property, "transparent interferometer returns its B,C input");
            EXPECT_FALSE(c.params.empty());
            named = true;
        }
    }
    EXPECT_TRUE(named);
    EXPECT_NE(format_report(report).find("FAIL optics-elements: transparent"), std::string::npos);
}
