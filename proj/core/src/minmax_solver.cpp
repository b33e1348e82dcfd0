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
#include "rhc/minmax_solver.hpp"

#include "rhc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace rhc {

namespace {

DisturbanceSequence zeros(int count, int n) {
    return DisturbanceSequence(static_cast<std::size_t>(count), Disturbance::Zero(n));
}

// Gradient of the horizon cost with respect to each disturbance of the window.
double cost_and_disturbance_gradient(const SystemModel& model, const CostModel& costs, int t,
                                     const State& x, const ControlSequence& controls,
                                     const DisturbanceSequence& W, const Eigen::VectorXd& theta,
                                     std::vector<Eigen::VectorXd>& grad) {
    const int M = static_cast<int>(controls.size());
    const StateSequence xs = rollout(model, x, controls, W, theta);
    double cost = 0.0;
    for (int k = 0; k < M; ++k) {
        cost += costs.stage_clamped(t + k, xs[static_cast<std::size_t>(k)],
                                    controls[static_cast<std::size_t>(k)]);
    }
    grad.assign(static_cast<std::size_t>(M), Eigen::VectorXd::Zero(model.state_dim()));
    Eigen::VectorXd gx;
    Eigen::VectorXd gu;
    Eigen::MatrixXd fx;
    Eigen::MatrixXd fu;
    // lambda holds dJ/dx_{k+1} when processing step k.
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(model.state_dim());
    for (int k = M - 1; k >= 0; --k) {
        const auto ks = static_cast<std::size_t>(k);
        if (k < M - 1) {
            grad[ks] = model.disturbance_jacobian(xs[ks], controls[ks], W[ks], theta).transpose() *
                       lambda;
            model.jacobians(xs[ks], controls[ks], W[ks], theta, fx, fu);
        }
        costs.stage_gradient(t + k, xs[ks], controls[ks], gx, gu);
        lambda = k < M - 1 ? Eigen::VectorXd(gx + fx.transpose() * lambda) : gx;
    }
    return cost;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    std::vector<double> sorted(v.data(), v.data() + n);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        cumulative += sorted[static_cast<std::size_t>(i)];
        const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[static_cast<std::size_t>(i)] - candidate > 0.0) {
            tau = candidate;
        }
    }
    return (v.array() - tau).cwiseMax(0.0).matrix();
}

struct DualPoint {
    Eigen::VectorXd lambda;
    Eigen::VectorXd q;
    double D = 0.0;
    ControlSequence controls;
};

} // namespace

WorstCase worst_case_disturbance(const SystemModel& model, const CostModel& costs, int t,
                                 const State& x, const ControlSequence& controls, double w_c,
                                 const Eigen::VectorXd& theta, const MinMaxOptions& options) {
    const int n = model.state_dim();
    const int M = static_cast<int>(controls.size());
    if (!(w_c >= 0.0) || !std::isfinite(w_c)) {
        throw ConfigError("disturbance bound w_c must be finite and nonnegative");
    }
    WorstCase best{zeros(M, n), 0.0};
    best.value = horizon_cost(model, costs, t, x, controls, best.disturbances, theta);
    const int free = M - 1;
    if (w_c == 0.0 || free < 1) {
        return best;
    }

    auto consider = [&](const DisturbanceSequence& W) {
        const double v = horizon_cost(model, costs, t, x, controls, W, theta);
        if (v > best.value) {
            best.value = v;
            best.disturbances = W;
        }
        return v;
    };

    if (n == 1 && free <= 20) {
        DisturbanceSequence W = zeros(M, 1);
        for (long mask = 0; mask < (1L << free); ++mask) {
            for (int k = 0; k < free; ++k) {
                W[static_cast<std::size_t>(k)][0] = ((mask >> k) & 1L) ? -w_c : w_c;
            }
            consider(W);
        }
        return best;
    }

    std::vector<Eigen::VectorXd> grad;
    auto ascend = [&](DisturbanceSequence W) {
        double value = cost_and_disturbance_gradient(model, costs, t, x, controls, W, theta, grad);
        for (int it = 0; it < options.max_inner_iterations; ++it) {
            DisturbanceSequence next = W;
            for (int k = 0; k < free; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                const double gn = grad[ks].norm();
                if (gn > 0.0) {
                    next[ks] = (w_c / gn) * grad[ks];
                }
            }
            std::vector<Eigen::VectorXd> next_grad;
            const double next_value =
                cost_and_disturbance_gradient(model, costs, t, x, controls, next, theta, next_grad);
            if (!(next_value > value + 1e-15 * std::abs(value))) {
                break;
            }
            W = std::move(next);
            value = next_value;
            grad = std::move(next_grad);
        }
        consider(W);
    };

    // Deterministic starts along plus and minus the gradient at zero disturbance.
    DisturbanceSequence W0 = zeros(M, n);
    cost_and_disturbance_gradient(model, costs, t, x, controls, W0, theta, grad);
    for (double sign : {1.0, -1.0}) {
        DisturbanceSequence W = zeros(M, n);
        for (int k = 0; k < free; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const double gn = grad[ks].norm();
            if (gn > 0.0) {
                W[ks] = sign * (w_c / gn) * grad[ks];
            } else {
                W[ks] = Eigen::VectorXd::Unit(n, 0) * (sign * w_c);
            }
        }
        ascend(W);
    }
    std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(t)));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int s = 0; s < options.inner_random_starts; ++s) {
        DisturbanceSequence W = zeros(M, n);
        for (int k = 0; k < free; ++k) {
            Eigen::VectorXd d(n);
            for (int i = 0; i < n; ++i) {
                d[i] = normal(rng);
            }
            const double dn = d.norm();
            W[static_cast<std::size_t>(k)] = dn > 0.0 ? Eigen::VectorXd((w_c / dn) * d)
                                                      : Eigen::VectorXd(Eigen::VectorXd::Unit(n, 0) * w_c);
        }
        ascend(W);
    }
    return best;
}

MinMaxSolution solve_minmax(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                            const State& x, int M, double w_c, const Eigen::VectorXd& theta,
                            const MinMaxOptions& options) {
    if (M < 1) {
        throw ConfigError("horizon must be at least 1");
    }
    if (!(w_c >= 0.0) || !std::isfinite(w_c)) {
        throw ConfigError("disturbance bound w_c must be finite and nonnegative");
    }
    const int n = model.state_dim();
    const DisturbanceSequence zero = zeros(M, n);
    const HorizonSolution nominal =
        solve_horizon(model, costs, box, t, x, zero, M, theta, options.inner_solver);

    MinMaxSolution out;
    WorstCase wc = worst_case_disturbance(model, costs, t, x, nominal.controls, w_c, theta, options);
    out.controls = nominal.controls;
    out.worst_disturbances = wc.disturbances;
    out.value = wc.value;
    out.lower_bound = nominal.value;
    out.gap = out.value - out.lower_bound;
    if (w_c == 0.0 || M < 2) {
        out.status = nominal.status;
        out.gap = 0.0;
        out.lower_bound = out.value;
        out.predicted_states = rollout(model, x, out.controls, out.worst_disturbances, theta);
        return out;
    }

    std::vector<DisturbanceSequence> cuts{wc.disturbances};
    DualPoint current;
    current.lambda = Eigen::VectorXd::Ones(1);
    current.controls = nominal.controls;

    auto evaluate = [&](const Eigen::VectorXd& lambda, const ControlSequence& warm) {
        DualPoint p;
        p.lambda = lambda;
        const std::vector<double> weights(lambda.data(), lambda.data() + lambda.size());
        const HorizonSolution sol = solve_horizon_weighted(model, costs, box, t, x, cuts, weights, M,
                                                           theta, options.inner_solver, &warm);
        p.controls = sol.controls;
        p.q.resize(static_cast<Eigen::Index>(cuts.size()));
        for (std::size_t s = 0; s < cuts.size(); ++s) {
            p.q[static_cast<Eigen::Index>(s)] =
                horizon_cost(model, costs, t, x, sol.controls, cuts[s], theta);
        }
        p.D = lambda.dot(p.q);
        return p;
    };

    double lower = -std::numeric_limits<double>::infinity();
    bool converged = false;
    constexpr std::size_t kOuterStall = 8;
    std::vector<double> gap_history;
    bool tight_master = false;
    int outer = 0;
    for (; outer < options.max_outer_iterations; ++outer) {
        current = evaluate(current.lambda, current.controls);
        double eta = 1.0 / std::max(1.0, current.q.maxCoeff() - current.q.minCoeff());
        // Any lambda gives a valid lower bound, so the master problem only needs to
        // be solved to a fraction of the current outer gap.
        const double outer_gap = out.value - std::max(lower, current.D);
        const double tight_target = 0.1 * options.tolerance * std::max(1.0, std::abs(current.D));
        const double dual_target = tight_master ? tight_target : std::max(tight_target, 0.05 * outer_gap);
        // Accelerated projected gradient ascent with adaptive restart. Every iterate
        // lies on the simplex, so each current.D is a valid lower bound.
        Eigen::VectorXd previous = current.lambda;
        double momentum = 1.0;
        // Near-duplicate cuts make the master degenerate; stop once the bound stalls.
        constexpr int kStallWindow = 50;
        double checkpoint = current.D;
        for (int it = 0; it < options.max_dual_iterations; ++it) {
            const double dual_gap = current.q.maxCoeff() - current.D;
            if (dual_gap <= dual_target) {
                break;
            }
            if (it > 0 && it % kStallWindow == 0) {
                if (current.D - checkpoint <= 1e-2 * dual_target) {
                    break;
                }
                checkpoint = current.D;
            }
            const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            const double beta = (momentum - 1.0) / momentum_next;
            DualPoint base = current;
            if (beta > 0.0) {
                const Eigen::VectorXd y = project_simplex(current.lambda + beta * (current.lambda - previous));
                if ((y - current.lambda).squaredNorm() > 0.0) {
                    base = evaluate(y, current.controls);
                }
            }
            bool accepted = false;
            DualPoint next;
            while (eta > 1e-20) {
                const Eigen::VectorXd lam = project_simplex(base.lambda + eta * base.q);
                const Eigen::VectorXd d = lam - base.lambda;
                if (d.squaredNorm() == 0.0) {
                    break;
                }
                next = evaluate(lam, base.controls);
                if (next.D >= base.D + base.q.dot(d) - d.squaredNorm() / (2.0 * eta) - 1e-15 * std::abs(base.D)) {
                    accepted = true;
                    break;
                }
                eta *= 0.5;
            }
            if (!accepted || next.D < current.D) {
                if (beta > 0.0) {
                    // Momentum overshot: restart from the current point.
                    previous = current.lambda;
                    momentum = 1.0;
                    continue;
                }
                break;
            }
            previous = current.lambda;
            current = std::move(next);
            momentum = momentum_next;
            eta *= 1.5;
        }
        lower = std::max(lower, current.D);

        wc = worst_case_disturbance(model, costs, t, x, current.controls, w_c, theta, options);
        if (wc.value < out.value) {
            out.value = wc.value;
            out.controls = current.controls;
            out.worst_disturbances = wc.disturbances;
        }
        out.lower_bound = std::min(lower, out.value);
        out.gap = out.value - out.lower_bound;
        if (out.gap <= options.tolerance * std::max(1.0, std::abs(out.value))) {
            converged = true;
            ++outer;
            break;
        }
        // A continuous adversary can leave the gap above tolerance for good; give up
        // once it has shrunk by less than 1% over the last kOuterStall rounds.
        gap_history.push_back(out.gap);
        if (gap_history.size() > kOuterStall &&
            out.gap >= 0.99 * gap_history[gap_history.size() - 1 - kOuterStall]) {
            ++outer;
            break;
        }
        bool duplicate = false;
        for (const auto& cut : cuts) {
            double dist = 0.0;
            for (std::size_t k = 0; k < cut.size(); ++k) {
                dist += (cut[k] - wc.disturbances[k]).squaredNorm();
            }
            if (dist <= 1e-24) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) {
            // The loose master may have produced controls whose worst case is already
            // a cut; only a repeat after a tight master solve means no progress.
            if (tight_master) {
                ++outer;
                break;
            }
            tight_master = true;
            continue;
        }
        tight_master = false;
        cuts.push_back(wc.disturbances);
        Eigen::VectorXd lam(current.lambda.size() + 1);
        lam << current.lambda, 0.0;
        current.lambda = lam;
    }
    out.outer_iterations = outer;
    out.cuts = static_cast<int>(cuts.size());
    out.status = converged ? SolverStatus::Converged : SolverStatus::MaxIterations;
    out.predicted_states = rollout(model, x, out.controls, out.worst_disturbances, theta);
    return out;
}

MinMaxSolution solve_minmax(const SystemModel& model, const CostModel& costs, const Box& box, int t,
                            const State& x, int M, double w_c, const MinMaxOptions& options) {
    return solve_minmax(model, costs, box, t, x, M, w_c, model.theta().values, options);
}

} // namespace rhc
