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
#include "rhc/horizon_solver.hpp"

#include "rhc/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace rhc {

std::string to_string(SolverStatus status) {
    switch (status) {
    case SolverStatus::Exact:
        return "exact";
    case SolverStatus::Converged:
        return "converged";
    case SolverStatus::MaxIterations:
        return "max-iterations";
    }
    return "unknown";
}

namespace {

using Objective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd*)>;

Eigen::VectorXd stack(const ControlSequence& controls, int m) {
    Eigen::VectorXd U(static_cast<Eigen::Index>(controls.size()) * m);
    for (std::size_t k = 0; k < controls.size(); ++k) {
        U.segment(static_cast<Eigen::Index>(k) * m, m) = controls[k];
    }
    return U;
}

ControlSequence unstack(const Eigen::VectorXd& U, int m) {
    ControlSequence controls(static_cast<std::size_t>(U.size() / m));
    for (std::size_t k = 0; k < controls.size(); ++k) {
        controls[k] = U.segment(static_cast<Eigen::Index>(k) * m, m);
    }
    return controls;
}

Eigen::VectorXd project_stacked(const Box& box, const Eigen::VectorXd& U) {
    const int m = box.dim();
    Eigen::VectorXd out(U.size());
    for (Eigen::Index k = 0; k < U.size() / m; ++k) {
        out.segment(k * m, m) = box.project(U.segment(k * m, m));
    }
    return out;
}

void validate(const SystemModel& model, const CostModel& costs, const Box& box, const State& x,
              const std::vector<DisturbanceSequence>& scenarios, const std::vector<double>& weights,
              int M, const Eigen::VectorXd& theta) {
    if (M < 1) {
        throw ConfigError("horizon must be at least 1");
    }
    if (costs.state_dim() != model.state_dim() || costs.control_dim() != model.control_dim()) {
        throw ConfigError("cost and model dimensions disagree");
    }
    box.validate();
    if (box.dim() != model.control_dim()) {
        throw ConfigError("control box dimension disagrees with the model");
    }
    require_dim(x, model.state_dim(), "horizon initial state");
    if (theta.size() != model.param_dim()) {
        throw ConfigError("planning parameter has dimension " + std::to_string(theta.size()) +
                          ", expected " + std::to_string(model.param_dim()));
    }
    if (scenarios.empty() || scenarios.size() != weights.size()) {
        throw ConfigError("need one weight per disturbance scenario");
    }
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        if (static_cast<int>(scenarios[s].size()) != M) {
            throw ConfigError("disturbance preview has length " + std::to_string(scenarios[s].size()) +
                              ", expected M=" + std::to_string(M));
        }
        for (const auto& w : scenarios[s]) {
            require_dim(w, model.state_dim(), "previewed disturbance");
        }
        if (!(weights[s] >= 0.0) || !std::isfinite(weights[s])) {
            throw ConfigError("scenario weights must be finite and nonnegative");
        }
    }
}

struct PgdResult {
    Eigen::VectorXd U;
    SolverStatus status = SolverStatus::Converged;
    int iterations = 0;
    double pg_norm = 0.0;
};

// Projected gradient with Barzilai-Borwein trial steps and a backtracking
// sufficient-decrease test. Iterates are always feasible.
PgdResult projected_gradient(const Objective& objective, const Box& box, Eigen::VectorXd U,
                             double initial_step, const SolverOptions& options) {
    PgdResult result;
    U = project_stacked(box, U);
    Eigen::VectorXd g;
    double f = objective(U, &g);
    double alpha = initial_step > 0.0 ? initial_step : 1.0 / std::max(1.0, g.norm());
    for (int it = 0; it < options.max_iterations; ++it) {
        const double pg = (U - project_stacked(box, U - g)).norm();
        result.pg_norm = pg;
        result.iterations = it;
        if (pg < options.tolerance) {
            result.U = U;
            result.status = SolverStatus::Converged;
            return result;
        }
        Eigen::VectorXd Un;
        Eigen::VectorXd gn;
        double fn = 0.0;
        bool accepted = false;
        while (alpha > 1e-20) {
            Un = project_stacked(box, U - alpha * g);
            const Eigen::VectorXd d = Un - U;
            fn = objective(Un, &gn);
            const double model_bound = f + g.dot(d) + d.squaredNorm() / (2.0 * alpha);
            if (std::isfinite(fn) && fn <= model_bound + 1e-15 * std::abs(f)) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            break;
        }
        const Eigen::VectorXd s = Un - U;
        const Eigen::VectorXd y = gn - g;
        const double sy = s.dot(y);
        alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : alpha * 2.0;
        U = std::move(Un);
        g = std::move(gn);
        f = fn;
    }
    result.U = U;
    result.pg_norm = (U - project_stacked(box, U - g)).norm();
    result.iterations = std::max(result.iterations, 1);
    result.status = result.pg_norm < options.tolerance ? SolverStatus::Converged
                                                      : SolverStatus::MaxIterations;
    return result;
}

// Stacked affine map over the costed states x_0..x_{M-1}:
// X = Sx x0 + Su U + Sw W, with blockdiag weights Qbar and Rbar.
struct StackedLQ {
    Eigen::MatrixXd Sx;
    Eigen::MatrixXd Su;
    Eigen::MatrixXd Sw;
    Eigen::MatrixXd Qbar;
    Eigen::MatrixXd Rbar;
    Eigen::MatrixXd H;
};

std::optional<StackedLQ> build_stacked(const SystemModel& model, const CostModel& costs, int t,
                                       int M, const Eigen::VectorXd& theta) {
    const auto form = model.linear_form(theta);
    if (!form) {
        return std::nullopt;
    }
    const int n = model.state_dim();
    const int m = model.control_dim();
    StackedLQ s;
    s.Sx = Eigen::MatrixXd::Zero(n * M, n);
    s.Su = Eigen::MatrixXd::Zero(n * M, m * M);
    s.Sw = Eigen::MatrixXd::Zero(n * M, n * M);
    s.Qbar = Eigen::MatrixXd::Zero(n * M, n * M);
    s.Rbar = Eigen::MatrixXd::Zero(m * M, m * M);
    std::vector<Eigen::MatrixXd> powers(static_cast<std::size_t>(M));
    powers[0] = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k < M; ++k) {
        powers[static_cast<std::size_t>(k)] = form->A * powers[static_cast<std::size_t>(k - 1)];
    }
    for (int k = 0; k < M; ++k) {
        const auto stage = costs.quadratic(t + k);
        if (!stage) {
            return std::nullopt;
        }
        s.Qbar.block(k * n, k * n, n, n) = stage->Q;
        s.Rbar.block(k * m, k * m, m, m) = stage->R;
        s.Sx.block(k * n, 0, n, n) = powers[static_cast<std::size_t>(k)];
        for (int j = 0; j < k; ++j) {
            const Eigen::MatrixXd& P = powers[static_cast<std::size_t>(k - 1 - j)];
            s.Su.block(k * n, j * m, n, m) = P * form->B;
            s.Sw.block(k * n, j * n, n, n) = P;
        }
    }
    s.H = s.Su.transpose() * s.Qbar * s.Su + s.Rbar;
    s.H = 0.5 * (s.H + s.H.transpose());
    return s;
}

// Adjoint gradient of the weighted horizon cost.
double weighted_cost_and_gradient(const SystemModel& model, const CostModel& costs, int t,
                                  const State& x0, const std::vector<DisturbanceSequence>& scenarios,
                                  const std::vector<double>& weights, const Eigen::VectorXd& theta,
                                  const Eigen::VectorXd& U, Eigen::VectorXd* grad) {
    const int n = model.state_dim();
    const int m = model.control_dim();
    const int M = static_cast<int>(U.size() / m);
    const ControlSequence controls = unstack(U, m);
    double total = 0.0;
    if (grad) {
        grad->setZero(U.size());
    }
    Eigen::MatrixXd fx;
    Eigen::MatrixXd fu;
    Eigen::VectorXd gx;
    Eigen::VectorXd gu;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        if (weights[s] == 0.0) {
            continue;
        }
        const StateSequence xs = rollout(model, x0, controls, scenarios[s], theta);
        double cost = 0.0;
        for (int k = 0; k < M; ++k) {
            cost += costs.stage_clamped(t + k, xs[static_cast<std::size_t>(k)],
                                        controls[static_cast<std::size_t>(k)]);
        }
        total += weights[s] * cost;
        if (!grad) {
            continue;
        }
        Eigen::VectorXd lambda = Eigen::VectorXd::Zero(n);
        for (int k = M - 1; k >= 0; --k) {
            const auto ks = static_cast<std::size_t>(k);
            costs.stage_gradient(t + k, xs[ks], controls[ks], gx, gu);
            if (k == M - 1) {
                grad->segment(k * m, m) += weights[s] * gu;
                lambda = gx;
                continue;
            }
            model.jacobians(xs[ks], controls[ks], scenarios[s][ks], theta, fx, fu);
            grad->segment(k * m, m) += weights[s] * (gu + fu.transpose() * lambda);
            lambda = gx + fx.transpose() * lambda;
        }
    }
    return total;
}

HorizonSolution finish(const SystemModel& model, const CostModel& costs, int t, const State& x,
                       const std::vector<DisturbanceSequence>& scenarios,
                       const std::vector<double>& weights, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& U, SolverStatus status, int iterations, double pg) {
    HorizonSolution sol;
    sol.controls = unstack(U, model.control_dim());
    sol.status = status;
    sol.iterations = iterations;
    sol.projected_gradient_norm = pg;
    sol.predicted_states = rollout(model, x, sol.controls, scenarios.front(), theta);
    double value = 0.0;
    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        if (weights[s] != 0.0) {
            value += weights[s] * horizon_cost(model, costs, t, x, sol.controls, scenarios[s], theta);
        }
    }
    sol.value = value;
    return sol;
}

} // namespace

double horizon_cost(const SystemModel& model, const CostModel& costs, int t, const State& x,
                    const ControlSequence& controls, const DisturbanceSequence& preview,
                    const Eigen::VectorXd& theta) {
    const StateSequence xs = rollout(model, x, controls, preview, theta);
    double cost = 0.0;
    for (std::size_t k = 0; k < controls.size(); ++k) {
        cost += costs.stage_clamped(t + static_cast<int>(k), xs[k], controls[k]);
    }
    return cost;
}

HorizonSolution solve_horizon_weighted(const SystemModel& model, const CostModel& costs,
                                       const Box& box, int t, const State& x,
                                       const std::vector<DisturbanceSequence>& scenarios,
                                       const std::vector<double>& weights, int M,
                                       const Eigen::VectorXd& theta, const SolverOptions& options,
                                       const ControlSequence* warm_start) {
    validate(model, costs, box, x, scenarios, weights, M, theta);
    const int n = model.state_dim();
    const int m = model.control_dim();
    double weight_sum = 0.0;
    for (double w : weights) {
        weight_sum += w;
    }
    if (weight_sum == 0.0) {
        throw ConfigError("scenario weights sum to zero");
    }

    Eigen::VectorXd U0 = Eigen::VectorXd::Zero(m * M);
    if (warm_start && static_cast<int>(warm_start->size()) == M) {
        U0 = stack(*warm_start, m);
    }

    const auto lq = options.allow_exact ? build_stacked(model, costs, t, M, theta) : std::nullopt;
    if (lq) {
        // The weighted objective is quadratic in U with the weight-averaged preview.
        Eigen::VectorXd Wbar = Eigen::VectorXd::Zero(n * M);
        for (std::size_t s = 0; s < scenarios.size(); ++s) {
            Wbar += (weights[s] / weight_sum) * stack(scenarios[s], n);
        }
        const Eigen::VectorXd offset = lq->Sx * x + lq->Sw * Wbar;
        const Eigen::VectorXd g = lq->Su.transpose() * (lq->Qbar * offset);

        Eigen::LLT<Eigen::MatrixXd> llt(lq->H);
        if (llt.info() == Eigen::Success) {
            const Eigen::VectorXd U = llt.solve(-g);
            if (U.allFinite() && project_stacked(box, U) == U) {
                return finish(model, costs, t, x, scenarios, weights, theta, U, SolverStatus::Exact,
                              0, 0.0);
            }
            U0 = project_stacked(box, U.allFinite() ? U : U0);
        }
        const Eigen::MatrixXd& H = lq->H;
        const Objective quad = [&H, &g](const Eigen::VectorXd& U, Eigen::VectorXd* grad) {
            const Eigen::VectorXd HU = H * U;
            if (grad) {
                *grad = 2.0 * (HU + g);
            }
            return U.dot(HU) + 2.0 * g.dot(U);
        };
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
        const double L = 2.0 * std::max(es.eigenvalues().maxCoeff(), 1e-300);
        const PgdResult r = projected_gradient(quad, box, U0, 1.0 / L, options);
        return finish(model, costs, t, x, scenarios, weights, theta, r.U, r.status, r.iterations,
                      r.pg_norm);
    }

    const Objective generic = [&](const Eigen::VectorXd& U, Eigen::VectorXd* grad) {
        return weighted_cost_and_gradient(model, costs, t, x, scenarios, weights, theta, U, grad);
    };
    const PgdResult r = projected_gradient(generic, box, U0, 0.0, options);
    return finish(model, costs, t, x, scenarios, weights, theta, r.U, r.status, r.iterations,
                  r.pg_norm);
}

HorizonSolution solve_horizon(const SystemModel& model, const CostModel& costs, const Box& box,
                              int t, const State& x, const DisturbanceSequence& preview, int M,
                              const Eigen::VectorXd& theta, const SolverOptions& options) {
    return solve_horizon_weighted(model, costs, box, t, x, {preview}, {1.0}, M, theta, options);
}

HorizonSolution solve_horizon(const SystemModel& model, const CostModel& costs, const Box& box,
                              int t, const State& x, const DisturbanceSequence& preview, int M,
                              const SolverOptions& options) {
    return solve_horizon(model, costs, box, t, x, preview, M, model.theta().values, options);
}

double value_function(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                      const State& x, const DisturbanceSequence& preview, int M,
                      const Eigen::VectorXd& theta, const SolverOptions& options) {
    return solve_horizon(model, costs, box, t, x, preview, M, theta, options).value;
}

Control kappa_M(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                const State& x, const DisturbanceSequence& preview, int M,
                const Eigen::VectorXd& theta, const SolverOptions& options) {
    return solve_horizon(model, costs, box, t, x, preview, M, theta, options).controls.front();
}

} // namespace rhc
