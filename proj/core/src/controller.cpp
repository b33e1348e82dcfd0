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
#include "rhc/controller.hpp"

#include "rhc/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace rhc {

void OnlineRunConfig::validate(ControllerKind kind) const {
    if (M < 2) {
        throw ConfigError("horizon M must be at least 2, got " + std::to_string(M));
    }
    if (T < M + 1) {
        throw ConfigError("run length T=" + std::to_string(T) + " must satisfy T >= M + 1 = " +
                          std::to_string(M + 1));
    }
    if (t_start < 1 || t_start > T) {
        throw ConfigError("t_start must lie in [1, T]");
    }
    if (!(state_ceiling > 0.0)) {
        throw ConfigError("state ceiling must be positive");
    }
    for (double g : gamma_grid) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw ConfigError("attenuation levels must be finite and nonnegative");
        }
    }
    if (kind == ControllerKind::UnknownPreview) {
        if (!N) {
            throw ConfigError("the unknown-system controller needs an estimation length N");
        }
        if (*N < 1 || *N >= T) {
            throw ConfigError("estimation length must satisfy 1 <= N < T, got N=" +
                              std::to_string(*N));
        }
    }
}

namespace {

void check_problem(const ControlProblem& problem, const OnlineRunConfig& config) {
    const auto& model = problem.model;
    const auto& costs = problem.costs;
    if (costs.state_dim() != model.state_dim() || costs.control_dim() != model.control_dim()) {
        throw ConfigError("cost and model dimensions disagree");
    }
    problem.box.validate();
    if (problem.box.dim() != model.control_dim()) {
        throw ConfigError("control box dimension disagrees with the model");
    }
    require_dim(problem.x1, model.state_dim(), "initial state");
    if (costs.horizon_end() < config.T) {
        throw ConfigError("cost horizon ends at t=" + std::to_string(costs.horizon_end()) +
                          " before T=" + std::to_string(config.T));
    }
}

DisturbanceSpec padded(const DisturbanceSpec& spec, int T, int state_dim) {
    spec.validate();
    if (spec.dim != state_dim) {
        throw ConfigError("disturbance dimension disagrees with the state dimension");
    }
    DisturbanceSpec out = spec;
    out.horizon_end = spec.horizon_end > 0 ? std::min(spec.horizon_end, T) : T;
    return out;
}

void guard(const State& x, int t, double ceiling, Trajectory& traj) {
    if (!x.allFinite() || x.norm() > ceiling) {
        std::ostringstream msg;
        msg << "state diverged at t=" << t << ": ||x||=" << x.norm() << " exceeds ceiling "
            << ceiling;
        throw DivergenceError(msg.str(), std::move(traj));
    }
}

} // namespace

Trajectory run_known_preview(const ControlProblem& problem, const DisturbanceSpec& disturbances,
                             const OnlineRunConfig& config, const SolverOptions& options) {
    config.validate(ControllerKind::KnownPreview);
    check_problem(problem, config);
    if (disturbances.adaptive()) {
        throw ConfigError("the greedy adversary reacts to the state and cannot be previewed");
    }
    const DisturbanceSpec spec = padded(disturbances, config.T, problem.model.state_dim());
    const Eigen::VectorXd& theta = problem.model.theta().values;

    Trajectory traj(ControllerKind::KnownPreview, config.M);
    traj.set_control_phase_start(config.t_start);
    State x = problem.x1;
    guard(x, config.t_start, config.state_ceiling, traj);
    for (int t = config.t_start; t <= config.T; ++t) {
        const DisturbanceSequence window = generate_window(spec, t, config.M);
        const HorizonSolution sol =
            solve_horizon(problem.model, problem.costs, problem.box, t, x, window, config.M, theta,
                          options);
        const Control& u = sol.controls.front();
        const double c = problem.costs.stage(t, x, u);
        const State next = step(problem.model, x, u, window.front());
        traj.append(StepRecord{t, x, u, window.front(), c, sol.value});
        guard(next, t + 1, config.state_ceiling, traj);
        x = next;
    }
    traj.set_final_state(x);
    return traj;
}

Trajectory run_unknown_preview(const ControlProblem& problem, const DisturbanceSpec& disturbances,
                               const Estimator& estimator, const OnlineRunConfig& config,
                               const SolverOptions& options) {
    config.validate(ControllerKind::UnknownPreview);
    check_problem(problem, config);
    if (disturbances.adaptive()) {
        throw ConfigError("the greedy adversary reacts to the state and cannot be previewed");
    }
    const DisturbanceSpec spec = padded(disturbances, config.T, problem.model.state_dim());
    const int N = *config.N;
    const int m = problem.model.control_dim();

    Trajectory traj(ControllerKind::UnknownPreview, config.M);
    traj.set_control_phase_start(N);
    Dataset data;
    Eigen::VectorXd theta_hat;
    State x = problem.x1;
    guard(x, config.t_start, config.state_ceiling, traj);
    for (int t = config.t_start; t <= config.T; ++t) {
        const DisturbanceSequence window = generate_window(spec, t, config.M);
        const Disturbance& w = window.front();
        Control u;
        double value = std::numeric_limits<double>::quiet_NaN();
        if (t < N) {
            u = probe_input(t, m, problem.box, config.seed);
        } else {
            if (t == N) {
                const EstimateReport report =
                    estimator.estimate(EstimationContext{data, N, problem.model});
                if (report.theta_hat.values.size() != problem.model.param_dim()) {
                    throw ConfigError("estimator returned a parameter of the wrong dimension");
                }
                theta_hat = report.theta_hat.values;
                traj.set_estimate(report);
            }
            const HorizonSolution sol = solve_horizon(problem.model, problem.costs, problem.box, t,
                                                      x, window, config.M, theta_hat, options);
            u = sol.controls.front();
            value = sol.value;
        }
        const double c = problem.costs.stage(t, x, u);
        const State next = step(problem.model, x, u, w);
        if (t < N) {
            data.add(next, x, u, w);
        }
        traj.append(StepRecord{t, x, u, w, c, value});
        guard(next, t + 1, config.state_ceiling, traj);
        x = next;
    }
    traj.set_final_state(x);
    return traj;
}

Trajectory run_minmax_no_preview(const ControlProblem& problem, const DisturbanceSpec& disturbances,
                                 double w_c, const OnlineRunConfig& config,
                                 const MinMaxOptions& options) {
    config.validate(ControllerKind::MinMax);
    check_problem(problem, config);
    if (!(w_c >= 0.0) || !std::isfinite(w_c)) {
        throw ConfigError("the min-max controller needs a finite disturbance bound w_c >= 0");
    }
    const DisturbanceSpec spec = padded(disturbances, config.T, problem.model.state_dim());
    const DisturbanceBall ball{problem.model.state_dim(), w_c};
    const Eigen::VectorXd& theta = problem.model.theta().values;

    Trajectory traj(ControllerKind::MinMax, config.M);
    traj.set_control_phase_start(config.t_start);
    traj.set_disturbance_bound(w_c);
    State x = problem.x1;
    guard(x, config.t_start, config.state_ceiling, traj);
    for (int t = config.t_start; t <= config.T; ++t) {
        const MinMaxSolution sol = solve_minmax(problem.model, problem.costs, problem.box, t, x,
                                                config.M, w_c, theta, options);
        const Control& u = sol.controls.front();
        Disturbance w;
        if (spec.adaptive()) {
            const GreedyContext context{problem.model, problem.costs, x, u, t};
            w = generate_window(spec, t, 1, &context).front();
        } else {
            w = disturbance_at(spec, t);
        }
        if (!ball.contains(w, 1e-12 * std::max(1.0, w_c))) {
            throw ConfigError("realized disturbance at t=" + std::to_string(t) +
                              " leaves the ball of radius w_c");
        }
        const double c = problem.costs.stage(t, x, u);
        const State next = step(problem.model, x, u, w);
        traj.append(StepRecord{t, x, u, w, c, sol.value});
        guard(next, t + 1, config.state_ceiling, traj);
        x = next;
    }
    traj.set_final_state(x);
    return traj;
}

} // namespace rhc
