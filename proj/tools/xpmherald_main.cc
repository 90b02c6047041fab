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

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xpmherald/errors.h"
#include "xpmherald/harness.h"
#include "xpmherald/verify.h"

namespace {

using namespace xpmh;
using namespace xpmh::harness;

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kInvariantFailure = 2,
    kTruncationFailure = 3,
};

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> trunc_tol;
    std::optional<unsigned> threads;

    ConfigOverrides overrides() const {
        return {seed, std::nullopt, trunc_tol, threads, out};
    }
};

void add_common(CLI::App *cmd, CommonFlags &f, bool seed_required) {
    auto *seed = cmd->add_option("--seed", f.seed, "Seed of the counter-based random stream");
    if (seed_required) {
        seed->required();
    }
    cmd->add_option("--out", f.out, "CSV output path (stdout when omitted)");
    cmd->add_option("--trunc-tol", f.trunc_tol, "Tail mass allowed outside the Fock cutoff");
    cmd->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
}

void write_text(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigurationError(path + ": cannot open for writing");
    }
    out << text;
}

int execute(const ExperimentConfig &cfg) {
    auto start = std::chrono::steady_clock::now();
    ResultTable table = run_experiment(cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string csv = to_csv(cfg, table);
    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        write_text(cfg.out, csv);
        write_text(cfg.out + ".manifest.json", run_manifest_json(cfg, table, wall));
        std::fprintf(stderr, "wrote %zu rows to %s\n", table.rows().size(), cfg.out.c_str());
    }
    if (std::size_t failed = table.truncation_failures()) {
        std::fprintf(stderr, "%zu rows failed to meet the truncation tolerance\n", failed);
        return kTruncationFailure;
    }
    return kOk;
}

nlohmann::json list_param(const std::vector<std::string> &values) {
    return values.size() == 1 ? nlohmann::json(values.front()) : nlohmann::json(values);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Heralded single-photon purification simulator"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string config_path;
    auto *run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    run->add_option("config", config_path, "Config file")->required();
    add_common(run, run_flags, false);

    std::string suite = "fast";
    unsigned verify_threads = 1;
    auto *verify_cmd = app.add_subcommand("verify", "Check the invariants of every module");
    verify_cmd->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    verify_cmd->add_option("--threads", verify_threads, "Worker threads")->check(CLI::Range(1u, 1024u));

    CommonFlags sample_flags;
    std::string p_a = "0.3", probe = "noisy", probe_param = "1", sample_phi = "pi", theta1 = "pi/4";
    std::uint64_t shots = 100000;
    auto *sample = app.add_subcommand("sample", "Monte Carlo heralding shots");
    sample->add_option("--p-a", p_a, "Efficiency of the source in A");
    sample->add_option("--probe", probe, "noisy or coherent")->check(CLI::IsMember({"noisy", "coherent"}));
    sample->add_option("--probe-param", probe_param, "p_B for a noisy probe, |beta| for a coherent one");
    sample->add_option("--phi-chi", sample_phi, "XPM phase, e.g. pi or 0.5");
    sample->add_option("--theta1", theta1, "First beam-splitter angle");
    sample->add_option("--shots", shots, "Number of shots")->check(CLI::PositiveNumber);
    add_common(sample, sample_flags, true);

    CommonFlags loss_flags;
    std::vector<std::string> loss_phi{"0.01", "pi"}, beta_sq{"1", "1e2", "1e4", "1e6"}, loss_pa{"0"};
    auto *loss = app.add_subcommand("loss-bound", "Largest tolerable absorption in the XPM medium");
    loss->add_option("--phi-chi", loss_phi, "XPM phases")->delimiter(',');
    loss->add_option("--beta-sq", beta_sq, "Mean photon numbers of the probe")->delimiter(',');
    loss->add_option("--p-a", loss_pa, "Source efficiencies; 0 selects the small-p_A limit")->delimiter(',');
    add_common(loss, loss_flags, false);

    CommonFlags cascade_flags;
    std::string scheme = "reuse-coherent", mode = "exact";
    std::vector<std::string> n_setups{"10"}, alpha_sq{"25"}, cascade_phi{"pi/2"}, cascade_p{"0.6"};
    std::optional<std::uint64_t> cascade_shots;
    auto *cascade = app.add_subcommand("cascade", "First-click distribution of chained setups");
    cascade->add_option("--scheme", scheme, "reuse-coherent or many-sources")
        ->check(CLI::IsMember({"reuse-coherent", "many-sources"}));
    cascade->add_option("--mode", mode, "exact or monte-carlo")->check(CLI::IsMember({"exact", "monte-carlo"}));
    cascade->add_option("--n", n_setups, "Number of setups")->delimiter(',');
    cascade->add_option("--alpha-sq", alpha_sq, "Mean photon number of the coherent state")->delimiter(',');
    cascade->add_option("--phi-chi", cascade_phi, "XPM phases")->delimiter(',');
    cascade->add_option("--p", cascade_p, "Source efficiencies")->delimiter(',');
    cascade->add_option("--shots", cascade_shots, "Monte Carlo shots")->check(CLI::PositiveNumber);
    add_common(cascade, cascade_flags, false);

    auto *list = app.add_subcommand("list", "List the named experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) {
            return execute(load_config(config_path, run_flags.overrides()));
        }
        if (*verify_cmd) {
            VerifyOptions options;
            options.suite = suite == "full" ? VerifySuite::kFull : VerifySuite::kFast;
            options.threads = verify_threads;
            VerifyReport report = verify(options);
            std::cout << format_report(report);
            return report.passed() ? kOk : kInvariantFailure;
        }
        if (*list) {
            for (const auto &e : list_experiments()) {
                std::cout << e.name << "\t" << e.summary << "\n";
            }
            return kOk;
        }
        nlohmann::json j;
        ConfigOverrides overrides;
        if (*sample) {
            j = {{"experiment", "purity-audit"},
                 {"params",
                  {{"p_A", p_a}, {"probe", probe}, {"probe_param", probe_param}, {"phi_chi", sample_phi},
                   {"theta1", theta1}}}};
            overrides = sample_flags.overrides();
            overrides.shots = shots;
        } else if (*loss) {
            j = {{"experiment", "loss-bounds"},
                 {"params", {{"phi_chi", list_param(loss_phi)}, {"beta_sq", list_param(beta_sq)},
                             {"p_A", list_param(loss_pa)}}}};
            overrides = loss_flags.overrides();
        } else {
            j = {{"experiment", "cascade"},
                 {"params",
                  {{"scheme", scheme}, {"mode", mode}, {"n_setups", list_param(n_setups)},
                   {"alpha_sq", list_param(alpha_sq)}, {"phi_chi", list_param(cascade_phi)},
                   {"p", list_param(cascade_p)}}}};
            overrides = cascade_flags.overrides();
            overrides.shots = cascade_shots;
        }
        return execute(parse_config(j.dump(), "command line", overrides));
    } catch (const ConfigurationError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const TruncationError &e) {
        std::fprintf(stderr, "truncation failure: %s\n", e.what());
        return kTruncationFailure;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInvariantFailure;
    }
}
