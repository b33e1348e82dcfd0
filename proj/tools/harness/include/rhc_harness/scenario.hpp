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
#ifndef RHC_HARNESS_SCENARIO_HPP
#define RHC_HARNESS_SCENARIO_HPP

#include "rhc/rhc.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rhc::harness {

/// Overrides for the derived constants; unset fields are certified from samples.
struct ConstantOverrides {
    std::optional<double> alpha_hi;
    std::optional<double> gamma_bar;
    std::optional<double> alpha_W;
    std::optional<double> gamma_bar_W;
    std::optional<double> alpha_V;
    std::optional<double> alpha_kappa;
    std::optional<double> eps_tilde;
    std::optional<double> a;
    /// Perturbation radius of the empirical parameter-sensitivity estimate.
    std::optional<double> theta_radius;
    /// Envelope length used for M_theta; defaults to M.
    std::optional<int> H;
    /// Negative controls: replace a value-decrease coefficient after the constants are computed.
    std::optional<double> Gamma_V;
    std::optional<double> Gamma_gamma_V;
};

struct EstimatorSpec {
    std::string kind = "least_squares";
    double c_g = 1.0;
    std::optional<std::uint64_t> seed;
};

struct SweepSpec {
    /// Parameter name to grid values, in declaration order.
    std::vector<std::pair<std::string, std::vector<double>>> grid;
    std::vector<double> gamma;
    std::vector<double> gamma_c_multiples;
    bool present = false;
};

/**
 * @brief Everything a run needs, parsed from a scenario document.
 *
 * The raw document is kept so that sweep cells can re-resolve derived
 * fields (cost horizon, seeds) after a parameter override.
 */
struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 0;

    nlohmann::json system;
    nlohmann::json cost;
    nlohmann::json box;

    DisturbanceSpec disturbance;
    bool disturbance_seed_explicit = false;

    ControllerKind controller = ControllerKind::KnownPreview;
    OnlineRunConfig run;
    /// The horizon is chosen by the certification fixed point.
    bool auto_horizon = false;
    State x1;

    std::optional<EstimatorSpec> estimator;
    std::optional<double> minmax_w_c;

    ConstantOverrides constants;
    ValueBoundOptions certification;
    bool certification_seed_explicit = false;
    int envelope_H_max = 50;

    SolverOptions solver;
    MinMaxOptions minmax_options;

    SweepSpec sweep;
    nlohmann::json document;
};

/// Parses and validates a scenario; throws ConfigError with the offending key on bad input.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Replaces the scenario seed and every seed that was not set explicitly.
void apply_seed(Scenario& scenario, std::uint64_t seed);

/// Sets one sweep parameter (T, M, N, seed, w_c, c_g, x1_scale).
void apply_parameter(Scenario& scenario, const std::string& name, double value);

/// The plant, costs and box a scenario describes.
struct Plant {
    std::shared_ptr<SystemModel> model;
    std::shared_ptr<CostModel> costs;
    Box box;
};

Plant build_plant(const Scenario& scenario);

std::unique_ptr<Estimator> build_estimator(const Scenario& scenario);

/// "name=v1,v2;name2=v3" into sweep grid entries.
std::vector<std::pair<std::string, std::vector<double>>> parse_grid_flag(const std::string& text);

/// Comma-separated doubles.
std::vector<double> parse_double_list(const std::string& text);

} // namespace rhc::harness

#endif // RHC_HARNESS_SCENARIO_HPP
