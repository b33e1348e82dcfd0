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
#ifndef RHC_HORIZON_SOLVER_HPP
#define RHC_HORIZON_SOLVER_HPP

#include "rhc/cost.hpp"
#include "rhc/model.hpp"

#include <string>
#include <vector>

namespace rhc {

enum class SolverStatus { Exact, Converged, MaxIterations };

std::string to_string(SolverStatus status);

struct SolverOptions {
    /// Stop when the projected-gradient norm falls below this value.
    double tolerance = 1e-8;
    int max_iterations = 10000;
    /// Permit the batched normal-equation backend on linear-quadratic problems.
    bool allow_exact = true;
};

/**
 * @brief Minimizer of the M-step cost-to-go for a previewed disturbance window.
 *
 * value is recomputed by rolling the returned controls through the model,
 * never taken from solver internals. predicted_states has M+1 entries.
 */
struct HorizonSolution {
    ControlSequence controls;
    StateSequence predicted_states;
    double value = 0.0;
    SolverStatus status = SolverStatus::Exact;
    int iterations = 0;
    double projected_gradient_norm = 0.0;
};

/// sum_{k<M} c_{t+k}(x_k, u_k) along the rollout from x; times past the cost horizon are clamped.
double horizon_cost(const SystemModel& model, const CostModel& costs, int t, const State& x,
                    const ControlSequence& controls, const DisturbanceSequence& preview,
                    const Eigen::VectorXd& theta);

/**
 * @brief Solves min over u_{t..t+M-1} in U of the horizon cost.
 *
 * The dynamics use theta, which may differ from the model's own parameter
 * when planning with an estimate. Linear models with quadratic costs are
 * solved through the stacked normal equations; if the unconstrained
 * minimizer leaves the box, or the problem is not linear-quadratic, a
 * projected-gradient method with adjoint gradients takes over.
 */
HorizonSolution solve_horizon(const SystemModel& model, const CostModel& costs, const Box& box,
                              int t, const State& x, const DisturbanceSequence& preview, int M,
                              const Eigen::VectorXd& theta, const SolverOptions& options = {});

HorizonSolution solve_horizon(const SystemModel& model, const CostModel& costs, const Box& box,
                              int t, const State& x, const DisturbanceSequence& preview, int M,
                              const SolverOptions& options = {});

/**
 * @brief Minimizes sum_s weights[s] * J(U, scenarios[s]) over one shared control sequence.
 *
 * value holds the weighted objective and predicted_states follow the first
 * scenario. Weights must be nonnegative; they need not sum to one.
 */
HorizonSolution solve_horizon_weighted(const SystemModel& model, const CostModel& costs,
                                       const Box& box, int t, const State& x,
                                       const std::vector<DisturbanceSequence>& scenarios,
                                       const std::vector<double>& weights, int M,
                                       const Eigen::VectorXd& theta,
                                       const SolverOptions& options = {},
                                       const ControlSequence* warm_start = nullptr);

/// V^t_M(x, w_{t:t+M-1}; theta).
double value_function(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                      const State& x, const DisturbanceSequence& preview, int M,
                      const Eigen::VectorXd& theta, const SolverOptions& options = {});

/// First control of the horizon-optimal sequence.
Control kappa_M(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                const State& x, const DisturbanceSequence& preview, int M,
                const Eigen::VectorXd& theta, const SolverOptions& options = {});

} // namespace rhc

#endif // RHC_HORIZON_SOLVER_HPP
