/*
 Copyright 2026 The rhc-attenuation Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "rhc_harness/commands.hpp"

#include "rhc_harness/io.hpp"

#include "CLI11.hpp"

#include <ostream>

namespace rhc::harness {

namespace {

Scenario load(const CommandOptions& opt) {
    Scenario s = load_scenario(opt.scenario);
    if (opt.seed) {
        apply_seed(s, *opt.seed);
    }
    return s;
}

// Runs the scenario and persists the three run artifacts; the outcome is returned for certification.
RunOutcome run_and_write(const CommandOptions& opt, std::ostream& log) {
    RunOutcome o = execute(load(opt));
    const auto gammas = gamma_levels(o.scenario, opt.gamma);
    write_text(opt.out / "trajectory.csv", trajectory_csv(o.trajectory, o.scenario.seed));
    write_json(opt.out / "metrics.json", metrics_json(o, gammas));
    write_json(opt.out / "constants.json", constants_json(o));
    if (!o.ok()) {
        write_json(opt.out / "error.json", error_json(o.error_kind, o.error_message, o.exit_code, o.scenario.seed));
        log << "error: " << o.error_message << '\n';
    } else {
        log << o.scenario.name << ": " << o.trajectory.size() << " steps, M=" << o.scenario.run.M
            << ", total cost " << format_double(o.trajectory.total_cost()) << '\n';
    }
    return o;
}

template <typename F>
int guarded(const CommandOptions& opt, std::ostream& log, F&& body) {
    auto fail = [&](const std::string& kind, const std::string& message, int code) {
        log << "error: " << message << '\n';
        try {
            write_json(opt.out / "error.json", error_json(kind, message, code, opt.seed.value_or(0)));
        } catch (const std::exception&) {
            // The output directory itself may be the problem; the message is already on the log.
        }
        return code;
    };
    try {
        return body();
    } catch (const HorizonThresholdError& e) {
        return fail("horizon_threshold", e.what(), kExitConfig);
    } catch (const ConfigError& e) {
        return fail("config", e.what(), kExitConfig);
    } catch (const CertificationError& e) {
        return fail("certification", e.what(), kExitRuntime);
    } catch (const RankDeficiencyError& e) {
        return fail("rank_deficiency", e.what(), kExitRuntime);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), kExitRuntime);
    }
}

} // namespace

int cmd_run(const CommandOptions& opt, std::ostream& log) {
    return guarded(opt, log, [&] { return run_and_write(opt, log).exit_code; });
}

int cmd_certify(const CommandOptions& opt, std::ostream& log) {
    return guarded(opt, log, [&] {
        const RunOutcome o = run_and_write(opt, log);
        if (!o.ok()) {
            return o.exit_code;
        }
        const auto reports = certify(o);
        const auto doc = certification_json(o, reports);
        write_json(opt.out / "certification.json", doc);
        for (const auto& r : reports) {
            log << r.check << ": " << (r.passed() ? "pass" : "FAIL") << " (max residual "
                << format_double(r.steps.empty() ? 0.0 : r.max_residual) << ", tolerance "
                << format_double(r.tolerance) << ")\n";
        }
        return doc["passed"].get<bool>() ? int(kExitOk) : int(kExitRuntime);
    });
}

int cmd_sweep(const CommandOptions& opt, std::ostream& log) {
    return guarded(opt, log, [&] {
        const Scenario s = load(opt);
        const auto grid = opt.grid ? parse_grid_flag(*opt.grid) : s.sweep.grid;
        const std::vector<double> gammas = opt.gamma.empty() ? s.sweep.gamma : opt.gamma;
        const SweepResult result = run_sweep(s, grid, gammas, opt.threads);
        write_text(opt.out / "sweep.csv", sweep_csv(result));
        std::size_t failed = 0;
        for (const auto& r : result.rows) {
            failed += r.status != "ok" ? 1 : 0;
        }
        log << "sweep: " << result.rows.size() << " rows, " << failed << " not ok\n";
        return int(kExitOk);
    });
}

int main_entry(int argc, const char* const* argv, std::ostream& log) {
    CLI::App app{"Receding-horizon control with attenuation guarantees"};
    app.require_subcommand(1);
    CommandOptions opt;
    std::string gamma_text;
    std::string grid_text;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scenario", opt.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "Output directory")->required();
        sub->add_option("--seed", seed, "Seed replacing every seed not fixed in the scenario");
        sub->add_option("--gamma", gamma_text, "Comma-separated attenuation levels");
    };
    CLI::App* run = app.add_subcommand("run", "Run the scenario's controller");
    CLI::App* cert = app.add_subcommand("certify", "Run and check the per-step inequalities");
    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter grid");
    add_common(run);
    add_common(cert);
    add_common(sweep);
    sweep->add_option("--grid", grid_text, "Grid as name=v1,v2;name2=v3 (T, M, N, seed, w_c, c_g, x1_scale)");
    sweep->add_option("--threads", opt.threads, "Worker threads (0: hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        log << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        for (auto* sub : {run, cert, sweep}) {
            if (sub->parsed() && sub->count("--seed") > 0) {
                opt.seed = seed;
            }
        }
        if (!gamma_text.empty()) {
            opt.gamma = parse_double_list(gamma_text);
        }
        if (sweep->parsed() && sweep->count("--grid") > 0) {
            opt.grid = grid_text;
        }
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    if (run->parsed()) {
        return cmd_run(opt, log);
    }
    if (cert->parsed()) {
        return cmd_certify(opt, log);
    }
    return cmd_sweep(opt, log);
}

} // namespace rhc::harness
