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
#ifndef RHC_MINMAX_SOLVER_HPP
#define RHC_MINMAX_SOLVER_HPP

#include "rhc/horizon_solver.hpp"

#include <cstdint>

namespace rhc {

struct MinMaxOptions {
    /// Stop once the certified gap (upper minus lower bound) is below tolerance * max(1, value).
    double tolerance = 1e-8;
    int max_outer_iterations = 200;
    int max_dual_iterations = 2000;
    /// Random boundary starts used by the inner maximization on top of the deterministic ones.
    int inner_random_starts = 8;
    int max_inner_iterations = 200;
    std::uint64_t seed = 0x5eed;
    SolverOptions inner_solver;
};

/**
 * @brief Saddle point of the worst-case horizon cost.
 *
 * value is sup_W J(controls, W) as computed by the inner maximization at the
 * returned controls, so it never understates the worst case found.
 * lower_bound is a dual bound on the min-max value; gap = value - lower_bound.
 */
struct MinMaxSolution {
    ControlSequence controls;
    DisturbanceSequence worst_disturbances;
    StateSequence predicted_states;
    double value = 0.0;
    double lower_bound = 0.0;
    double gap = 0.0;
    SolverStatus status = SolverStatus::Converged;
    int outer_iterations = 0;
    int cuts = 0;
};

struct WorstCase {
    DisturbanceSequence disturbances;
    double value = 0.0;
};

/**
 * @brief max over ||w_k|| <= w_c of the horizon cost at fixed controls.
 *
 * The last disturbance of the window cannot reach a costed state and is
 * fixed to zero. Scalar states enumerate all sign vertices, which is exact
 * whenever the cost is convex in the disturbances. Otherwise a multi-start
 * block conditional-gradient ascent is used; each sweep sets
 * w_k = w_c * g_k / ||g_k||, which never decreases a convex objective.
 */
WorstCase worst_case_disturbance(const SystemModel& model, const CostModel& costs, int t,
                                 const State& x, const ControlSequence& controls, double w_c,
                                 const Eigen::VectorXd& theta, const MinMaxOptions& options = {});

/**
 * @brief inf over U in the box of sup over the disturbance balls of the horizon cost.
 *
 * Cutting-plane scheme: the adversary set is grown by the worst case at the
 * current controls, and each finite min-max is solved in its dual over the
 * simplex of scenario weights, only as accurately as the current outer gap
 * requires. Scalar disturbances have finitely many candidate cuts and close the
 * gap. Balls in higher dimension may stall short of tolerance; the solver then
 * stops with status MaxIterations and a still valid [lower_bound, value] bracket.
 */
MinMaxSolution solve_minmax(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                            const State& x, int M, double w_c, const Eigen::VectorXd& theta,
                            const MinMaxOptions& options = {});

MinMaxSolution solve_minmax(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                            const State& x, int M, double w_c, const MinMaxOptions& options = {});

} // namespace rhc

#endif // RHC_MINMAX_SOLVER_HPP
