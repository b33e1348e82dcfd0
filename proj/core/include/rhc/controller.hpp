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
#ifndef RHC_CONTROLLER_HPP
#define RHC_CONTROLLER_HPP

#include "rhc/disturbance.hpp"
#include "rhc/estimation.hpp"
#include "rhc/horizon_solver.hpp"
#include "rhc/minmax_solver.hpp"
#include "rhc/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rhc {

struct OnlineRunConfig {
    int T = 0;
    int M = 2;
    /// Estimation-phase length; used by the unknown-system controller only.
    std::optional<int> N;
    std::vector<double> gamma_grid;
    std::uint64_t seed = 0;
    double state_ceiling = 1e6;
    /// First closed-loop step; x1 of the problem is the state at this time.
    int t_start = 1;

    /// Requires T >= M + 1, M >= 2, and 1 <= N < T for the unknown-system controller.
    void validate(ControllerKind kind) const;
};

/// The plant, its costs, the control box U and the state at the first step.
struct ControlProblem {
    const SystemModel& model;
    const CostModel& costs;
    Box box;
    State x1;
};

/// The state left the configured ceiling or became non-finite; carries the steps completed so far.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, Trajectory partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}

    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

/**
 * @brief Receding-horizon control with disturbance preview on the known system.
 *
 * At each t the controller sees w_{t..t+M-1} (zero beyond T), applies the
 * first control of the horizon-optimal sequence and records V^t_M.
 */
Trajectory run_known_preview(const ControlProblem& problem, const DisturbanceSpec& disturbances,
                             const OnlineRunConfig& config, const SolverOptions& options = {});

/**
 * @brief Estimate-then-control on a system with unknown parameter.
 *
 * Steps t < N apply seeded probe inputs and record (x_{t+1}, x_t, u_t, w_t).
 * At t = N the estimator produces theta_hat; from then on the controller
 * plans with theta_hat while the true system evolves the state.
 */
Trajectory run_unknown_preview(const ControlProblem& problem, const DisturbanceSpec& disturbances,
                               const Estimator& estimator, const OnlineRunConfig& config,
                               const SolverOptions& options = {});

/**
 * @brief Min-max receding-horizon control without preview.
 *
 * The controller plans against every disturbance in the ball of radius w_c;
 * the realized disturbance, which may react to (x_t, u_t), drives the plant.
 */
Trajectory run_minmax_no_preview(const ControlProblem& problem, const DisturbanceSpec& disturbances,
                                 double w_c, const OnlineRunConfig& config,
                                 const MinMaxOptions& options = {});

} // namespace rhc

#endif // RHC_CONTROLLER_HPP
