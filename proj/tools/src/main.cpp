// Copyright 2026 The uavsec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uavsec/cli/config.hpp"
#include "uavsec/cli/output.hpp"
#include "uavsec/cli/verify.hpp"
#include "uavsec/errors.hpp"

namespace {

using namespace uavsec;
using namespace uavsec::cli;

struct Common {
    Flags flags;
    std::optional<std::string> config_file;
    std::optional<std::string> out_dir;
    std::string format = "csv";
    bool no_timestamp = false;
    std::optional<std::string> dump;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool sweep_flags) {
    Flags& f = c.flags;
    cmd->add_option("-c,--config", c.config_file, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--N", f.num_uts, "number of UTs");
    cmd->add_option("--M", f.num_urs, "number of URs");
    cmd->add_option("--S,--R", f.num_ues, "number of UEs");
    cmd->add_option("--Q,--quota", f.quota, "quota per UR");
    cmd->add_option("--P0", f.power, "power budget, e.g. 10dBm or 0.01");
    cmd->add_option("--sigma2", f.noise, "noise power, e.g. -60dBm");
    cmd->add_option("--gamma", f.threshold, "SNR threshold, e.g. 10dB");
    cmd->add_option("--alpha", f.alpha, "path-loss exponent");
    cmd->add_option("--W", f.bandwidth, "bandwidth in Hz");
    cmd->add_option("--repetitions", f.repetitions, "layouts per sweep point");
    cmd->add_option("--seed", f.seed, "master seed");
    cmd->add_option("--threads", f.threads, "worker threads, 0 = all cores");
    cmd->add_option("--stage1", f.stage1, "PMA, DAMS, RMS (comma list)");
    cmd->add_option("--stage2", f.stage2, "OCFA, AS, FGS, DCS (comma list)");
    if (sweep_flags) {
        cmd->add_option("--sweep", f.sweep, "AXIS=VALUES, e.g. M=2..7");
        cmd->add_option("--axis", f.axis, "N, M, S/R, Q, P0, gamma, sigma2, alpha, W");
        cmd->add_option("--values", f.values, "e.g. 6,8,...,18dBm");
        cmd->add_option("--quota-schedule", f.quota_schedule, "quota per sweep point, e.g. 6,4,3,3,3,2");
    }
    cmd->add_option("-o,--out", c.out_dir, "output directory (default $UAVSEC_OUTPUT_DIR or .)");
    cmd->add_option("--format", c.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    cmd->add_flag("--no-timestamp", c.no_timestamp, "omit the generated-at comment");
    cmd->add_option("--dump", c.dump, "write one JSON line per trial to this file");
    cmd->add_flag("-q,--quiet", c.quiet, "no summary on stdout");
}

OutputFormat format_of(const std::string& s) {
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    return OutputFormat::Csv;
}

void print_summary(const std::string& tag, const ExperimentResult& result) {
    for (const PointResult& p : result.points)
        for (const SchemeSummary& s : p.schemes) {
            const MetricStats& m = s.metrics[0];
            std::printf("%s %s=%g %-10s total_utility %.6f +- %.6f (n=%d, failed=%d, sentinel=%d)\n",
                        tag.c_str(), std::string(to_string(result.axis)).c_str(), p.sweep_value,
                        s.scheme.label().c_str(), m.mean, m.stddev, m.n, s.failed, s.sentinel);
        }
}

/// Opens the dump file (if any) and returns an observer writing to it.
struct Dump {
    std::ofstream out;
    TrialObserver observer() {
        if (!out.is_open()) return {};
        return [this](const TrialRecord& r) { out << trial_json(r).dump() << '\n'; };
    }
};

void open_dump(Dump& d, const Common& c) {
    if (!c.dump) return;
    const std::filesystem::path path(*c.dump);
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    d.out.open(path);
    if (!d.out) throw IoError("cannot write dump file " + *c.dump);
}

std::filesystem::path out_dir(const Common& c) {
    return c.out_dir ? std::filesystem::path(*c.out_dir) : default_output_dir();
}

int cmd_run(const Common& c, bool require_sweep) {
    const ExperimentConfig config = parse_config(c.config_file, c.flags);
    if (require_sweep && config.sweep.axis == SweepAxis::None)
        throw ConfigError("sweep: no axis given (use --axis/--values or --sweep)");
    Dump dump;
    open_dump(dump, c);
    const ExperimentResult result = run_experiment(config, dump.observer());
    const std::string stem =
        config.sweep.axis == SweepAxis::None ? "run" : "sweep_" + std::string(to_string(config.sweep.axis));
    for (const auto& path : emit_results(result, config, out_dir(c), stem, format_of(c.format), !c.no_timestamp))
        if (!c.quiet) std::printf("wrote %s\n", path.string().c_str());
    if (!c.quiet) print_summary(stem, result);
    return kExitOk;
}

int cmd_ablation(const Common& c) {
    const ExperimentConfig config = parse_config(c.config_file, c.flags);
    Dump dump;
    open_dump(dump, c);
    const auto quadrants = ablation_two_stage(config, dump.observer());
    const char* tags[] = {"a", "b", "c", "d"};
    for (std::size_t q = 0; q < quadrants.size(); ++q) {
        const std::string stem = std::string("ablation_") + tags[q];
        for (const auto& path :
             emit_results(quadrants[q], config, out_dir(c), stem, format_of(c.format), !c.no_timestamp))
            if (!c.quiet) std::printf("wrote %s\n", path.string().c_str());
        if (!c.quiet) print_summary(stem, quadrants[q]);
    }
    return kExitOk;
}

int cmd_verify(std::uint64_t seed, int instances) {
    if (instances < 1) throw ConfigError("instances: must be >= 1");
    bool ok = true;
    for (const SuiteReport& r : run_verification(seed, instances)) {
        std::printf("%s %s: %d/%d instances%s%s\n", r.failures == 0 ? "PASS" : "FAIL", r.name.c_str(),
                    r.instances - r.failures, r.instances, r.failures ? " ok, first failure: " : "",
                    r.first_failure.c_str());
        ok = ok && r.failures == 0;
    }
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage secure-transmission simulator for UAV networks"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, ablation_opts;
    CLI::App* run = app.add_subcommand("run", "Monte-Carlo run at one configuration (or a sweep)");
    add_common(run, run_opts, true);
    CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
    add_common(sweep, sweep_opts, true);
    CLI::App* ablation = app.add_subcommand("ablation", "Four-quadrant two-stage ablation");
    add_common(ablation, ablation_opts, false);

    std::uint64_t verify_seed = 7;
    int verify_instances = 50;
    CLI::App* verify = app.add_subcommand("verify", "Check optimality and stability invariants");
    verify->add_option("--seed", verify_seed, "seed");
    verify->add_option("--instances", verify_instances, "instances per suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(run_opts, false);
        if (*sweep) return cmd_run(sweep_opts, true);
        if (*ablation) return cmd_ablation(ablation_opts);
        if (*verify) return cmd_verify(verify_seed, verify_instances);
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "uavsec: infeasible: %s\n", e.what());
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "uavsec: config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "uavsec: I/O error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "uavsec: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
