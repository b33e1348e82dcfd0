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
#ifndef RHC_HARNESS_RUNNER_HPP
#define RHC_HARNESS_RUNNER_HPP

#include "rhc_harness/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rhc::harness {

/// Exit codes of the rhc tool.
enum ExitCode : int { kExitOk = 0, kExitRuntime = 1, kExitConfig = 2 };

/// Constants of a scenario together with the sample-based estimates they came from.
struct ConstantsBundle {
    ConstantsReport report;
    std::optional<ValueBounds> value_bounds;
    std::optional<ValueBounds> minmax_bounds;
    std::optional<ThetaLipschitz> theta_lipschitz;
    /// Horizons visited by the automatic horizon search, last one chosen.
    std::vector<int> horizon_trail;
};

/**
 * @brief Resolves every constant the scenario's controller needs.
 *
 * With an automatic horizon, M is raised to M_min of the constants certified
 * at the current M until the two agree; the scenario's M is updated in place.
 * Throws HorizonThresholdError when a fixed M is below the threshold.
 */
ConstantsBundle resolve_constants(Scenario& scenario, const Plant& plant);

/// Outcome of one closed-loop run. A diverged run keeps the steps completed before the failure.
struct RunOutcome {
    Scenario scenario;
    ConstantsBundle constants;
    Trajectory trajectory;
    std::string error_kind;
    std::string error_message;
    int exit_code = kExitOk;

    bool ok() const { return exit_code == kExitOk; }
};

/// Builds, resolves constants and runs; configuration errors propagate, runtime failures are recorded.
RunOutcome execute(Scenario scenario);

/// Attenuation levels reported in metrics: the scenario grid plus the controller's threshold.
std::vector<double> gamma_levels(const Scenario& scenario, const std::vector<double>& extra);

/// Threshold attenuation of the controller: gamma_c, or gamma_{c,W} for the min-max controller.
std::optional<double> threshold_gamma(const RunOutcome& outcome);

nlohmann::json metrics_json(const RunOutcome& outcome, const std::vector<double>& gammas);
nlohmann::json constants_json(const RunOutcome& outcome);

/// Every inequality check that applies to the run's controller.
std::vector<CertificationReport> certify(const RunOutcome& outcome);
nlohmann::json certification_json(const RunOutcome& outcome, const std::vector<CertificationReport>& reports);

struct SweepRow {
    int cell = 0;
    std::vector<double> params;
    std::uint64_t seed = 0;
    std::string gamma_label;
    double gamma = 0.0;
    double regret = 0.0;
    double total_cost = 0.0;
    double total_energy = 0.0;
    double control_regret = 0.0;
    double control_cost = 0.0;
    double control_energy = 0.0;
    std::string status = "ok";
    std::string error;
};

struct SweepResult {
    std::vector<std::string> param_names;
    std::vector<SweepRow> rows;
};

/**
 * @brief Cartesian product of the grid, cells run on a thread pool.
 *
 * Rows come out in cell order whatever the scheduling. A failed cell is
 * recorded with its error and the sweep continues. An empty grid, or any
 * parameter with no values, yields no rows.
 */
SweepResult run_sweep(const Scenario& scenario,
                      const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                      const std::vector<double>& gammas, unsigned threads = 0);

} // namespace rhc::harness

#endif // RHC_HARNESS_RUNNER_HPP
