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
#include "rhc/certification.hpp"

#include "rhc/errors.hpp"
#include "rhc/horizon_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace rhc {

std::string to_string(DecreaseCheck which) {
    switch (which) {
    case DecreaseCheck::Preview:
        return "value_decrease";
    case DecreaseCheck::EstimatedPreview:
        return "estimated_value_decrease";
    case DecreaseCheck::MinMax:
        return "minmax_value_decrease";
    }
    return "unknown";
}

void CertificationReport::add(int t, double residual) {
    steps.push_back(t);
    residuals.push_back(residual);
    max_residual = std::max(max_residual, residual);
    if (!(residual <= tolerance)) {
        violations.push_back(t);
    }
}

double residual_tolerance(double value_scale) {
    return 1e-6 * std::max(1.0, std::abs(value_scale) / 1e3);
}

namespace {

double value_scale(const Trajectory& trajectory) {
    double scale = 0.0;
    for (const auto& r : trajectory.records()) {
        if (std::isfinite(r.value)) {
            scale = std::max(scale, std::abs(r.value));
        }
    }
    return scale;
}

ControllerKind expected_kind(DecreaseCheck which) {
    switch (which) {
    case DecreaseCheck::Preview:
        return ControllerKind::KnownPreview;
    case DecreaseCheck::EstimatedPreview:
        return ControllerKind::UnknownPreview;
    case DecreaseCheck::MinMax:
        return ControllerKind::MinMax;
    }
    return ControllerKind::KnownPreview;
}

} // namespace

CertificationReport certify_lemma(const Trajectory& trajectory, const CostModel& costs,
                                  DecreaseCheck which, const ConstantsReport& constants,
                                  std::optional<double> theta_error) {
    if (trajectory.kind() != expected_kind(which)) {
        throw ConfigError("check '" + to_string(which) + "' does not apply to a " +
                          to_string(trajectory.kind()) + " trajectory");
    }
    CertificationReport report;
    report.check = to_string(which);
    report.label = constants.provenance;
    report.tolerance = residual_tolerance(value_scale(trajectory));

    double sigma_coef = constants.Gamma_V;
    double energy_coef = constants.Gamma_gamma_V;
    double offset = 0.0;
    bool window_energy = true;
    if (which == DecreaseCheck::EstimatedPreview) {
        if (!constants.theta) {
            throw ConfigError("the estimated-system check needs the parameter-error constants");
        }
        if (!theta_error) {
            if (!trajectory.estimate() || !trajectory.estimate()->actual_error) {
                throw ConfigError("the estimated-system check needs ||theta_hat - theta||");
            }
            theta_error = *trajectory.estimate()->actual_error;
        }
        offset = constants.theta->Gamma_theta_V * *theta_error;
    } else if (which == DecreaseCheck::MinMax) {
        if (!constants.minmax) {
            throw ConfigError("the min-max check needs the worst-case constants");
        }
        if (!trajectory.disturbance_bound()) {
            throw ConfigError("the min-max check needs the disturbance bound w_c");
        }
        sigma_coef = constants.minmax->Gamma_W_V;
        energy_coef = constants.minmax->Gamma_gamma_W_V;
        window_energy = false;
    }

    const int M = trajectory.horizon();
    const auto& recs = trajectory.records();
    for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
        const StepRecord& now = recs[i];
        const StepRecord& next = recs[i + 1];
        if (!std::isfinite(now.value) || !std::isfinite(next.value)) {
            continue;
        }
        double energy = 0.0;
        if (window_energy) {
            energy = squared_norm_sum(trajectory.disturbance_window(now.t, M));
        } else {
            const double w_c = *trajectory.disturbance_bound();
            energy = w_c * w_c;
        }
        const double rhs = sigma_coef * costs.sigma(now.x) + energy_coef * energy + offset;
        report.add(now.t, (next.value - now.value) - rhs);
    }
    return report;
}

CertificationReport check_cost_envelope(const Trajectory& trajectory, const CostModel& costs,
                                        const ConstantsReport& constants, int H_max,
                                        std::optional<int> only_start) {
    CertificationReport report;
    report.check = "cost_envelope";
    report.label = constants.provenance;
    const int M = constants.M;
    const auto& recs = trajectory.records();
    if (recs.empty()) {
        return report;
    }
    double scale = 0.0;
    for (const auto& r : recs) {
        scale = std::max(scale, r.stage_cost);
    }
    report.tolerance = residual_tolerance(scale);
    const int first = recs.front().t;
    const int last = recs.back().t;
    std::vector<CostEnvelope> envelopes;
    for (int H = M; H <= H_max; ++H) {
        envelopes.push_back(
            lemma2_coefficients(constants.alpha_hi, constants.gamma_bar, constants.b, constants.a, M, H, 0));
    }
    for (int t = first; t <= last; ++t) {
        if (only_start && t != *only_start) {
            continue;
        }
        const double sigma0 = costs.sigma(trajectory.at_time(t).x);
        for (const auto& env : envelopes) {
            if (t + env.H > last) {
                break;
            }
            double rhs = env.M_lambda * std::exp(-env.lambda * env.H) * sigma0;
            const DisturbanceSequence ws =
                trajectory.disturbance_window(t, static_cast<int>(env.weights.size()));
            for (std::size_t k = 0; k < ws.size(); ++k) {
                rhs += env.weights[k] * ws[k].squaredNorm();
            }
            report.add(t + env.H, trajectory.at_time(t + env.H).stage_cost - rhs);
        }
    }
    return report;
}

CertificationReport check_minmax_total(const Trajectory& trajectory, const CostModel& costs,
                                       const ConstantsReport& constants) {
    if (!constants.minmax || !trajectory.disturbance_bound()) {
        throw ConfigError("the worst-case total check needs min-max constants and w_c");
    }
    CertificationReport report;
    report.check = "minmax_total_cost";
    report.label = constants.provenance;
    if (trajectory.empty()) {
        return report;
    }
    const auto& mm = *constants.minmax;
    const double w_c = *trajectory.disturbance_bound();
    const double T = static_cast<double>(trajectory.size());
    const double bound = mm.gamma_c_W * T * w_c * w_c +
                         mm.alpha_W / (1.0 - mm.a) * costs.sigma(trajectory.records().front().x);
    report.add(trajectory.records().back().t, trajectory.total_cost() - bound);
    return report;
}

// ---------------------------------------------------------------------------
// Sample-based value bounds.

namespace {

struct BoundPoint {
    State x;
    Eigen::VectorXd z;
    int t = 1;
    double V = 0.0;
    double s = 0.0;
    double e = 0.0;
};

struct BoundProblem {
    int n = 1;
    int z_dim = 0;
    std::function<double(const State&, const Eigen::VectorXd&, int)> value;
    std::function<double(const Eigen::VectorXd&)> energy;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> project_z;
    std::function<Eigen::VectorXd(std::mt19937_64&)> draw_z;
    std::function<double(const State&)> sigma;
    int t_end = 1;
};

Eigen::VectorXd random_ball(std::mt19937_64& rng, int dim, double radius) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd d(dim);
    do {
        for (int i = 0; i < dim; ++i) {
            d[i] = normal(rng);
        }
    } while (d.norm() == 0.0);
    return d * (radius * unit(rng) / d.norm());
}

State project_ball(const State& x, double radius) {
    const double n = x.norm();
    return n > radius ? State(x * (radius / n)) : x;
}

double ratio(const BoundPoint& p, double a, double g) {
    const double denom = a * p.s + g * p.e;
    if (denom > 0.0) {
        return p.V / denom;
    }
    return p.V > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
}

ValueBounds fit_bounds(const BoundProblem& prob, const ValueBoundOptions& opt) {
    if (opt.samples < 1) {
        throw ConfigError("value-bound certification needs at least one sample");
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> time(1, prob.t_end);
    auto make = [&](State x, Eigen::VectorXd z, int t) {
        BoundPoint p;
        p.x = std::move(x);
        p.z = std::move(z);
        p.t = t;
        p.V = prob.value(p.x, p.z, t);
        p.s = prob.sigma(p.x);
        p.e = prob.energy(p.z);
        return p;
    };

    std::vector<BoundPoint> pts;
    pts.reserve(static_cast<std::size_t>(opt.samples));
    for (int i = 0; i < opt.samples; ++i) {
        const int kind = i % 3;
        State x = kind == 1 ? State(State::Zero(prob.n)) : State(random_ball(rng, prob.n, opt.state_radius));
        Eigen::VectorXd z = kind == 0 ? Eigen::VectorXd(Eigen::VectorXd::Zero(prob.z_dim)) : prob.draw_z(rng);
        pts.push_back(make(std::move(x), std::move(z), time(rng)));
    }

    bool any_s = false;
    bool any_e = false;
    for (const auto& p : pts) {
        any_s = any_s || p.s > 0.0;
        any_e = any_e || p.e > 0.0;
    }
    if (!any_s && !any_e) {
        throw CertificationError(
            "value-bound certification needs samples with nonzero sigma(x) or disturbance energy");
    }

    // Nonnegative least squares on the two features.
    double Sss = 0.0, See = 0.0, Sse = 0.0, Svs = 0.0, Sve = 0.0, Svv = 0.0;
    for (const auto& p : pts) {
        Sss += p.s * p.s;
        See += p.e * p.e;
        Sse += p.s * p.e;
        Svs += p.V * p.s;
        Sve += p.V * p.e;
        Svv += p.V * p.V;
    }
    auto sse = [&](double a, double g) {
        return Svv - 2.0 * (a * Svs + g * Sve) + a * a * Sss + 2.0 * a * g * Sse + g * g * See;
    };
    double a = 0.0, g = 0.0;
    const double det = Sss * See - Sse * Sse;
    if (det > 1e-14 * std::max(1.0, Sss * See)) {
        a = (Svs * See - Sve * Sse) / det;
        g = (Sve * Sss - Svs * Sse) / det;
    }
    if (!(a >= 0.0 && g >= 0.0) || det <= 1e-14 * std::max(1.0, Sss * See)) {
        const double a_only = Sss > 0.0 ? std::max(0.0, Svs / Sss) : 0.0;
        const double g_only = See > 0.0 ? std::max(0.0, Sve / See) : 0.0;
        if (sse(a_only, 0.0) <= sse(0.0, g_only)) {
            a = a_only;
            g = 0.0;
        } else {
            a = 0.0;
            g = g_only;
        }
    }
    ValueBounds out;
    out.alpha_fit = a;
    out.gamma_fit = g;
    out.samples = opt.samples;

    // (1+1)-ES from the highest-scoring points; the perturbed coordinates follow the point's kind.
    std::normal_distribution<double> normal(0.0, 1.0);
    auto refine = [&](const std::function<double(const BoundPoint&)>& score, bool want_s, bool want_e) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if ((pts[i].s > 0.0) == want_s && (pts[i].e > 0.0) == want_e) {
                order.push_back(i);
            }
        }
        std::sort(order.begin(), order.end(),
                  [&](std::size_t i, std::size_t j) { return score(pts[i]) > score(pts[j]); });
        const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(opt.refine_starts), order.size());
        std::vector<BoundPoint> found;
        for (std::size_t k = 0; k < starts; ++k) {
            BoundPoint cur = pts[order[k]];
            double cur_score = score(cur);
            double step = 0.1 * std::max(opt.state_radius, opt.disturbance_radius);
            for (int it = 0; it < opt.refine_iterations; ++it) {
                State x = cur.x;
                Eigen::VectorXd z = cur.z;
                if (want_s) {
                    for (int i = 0; i < x.size(); ++i) {
                        x[i] += step * normal(rng);
                    }
                    x = project_ball(x, opt.state_radius);
                }
                if (want_e) {
                    for (int i = 0; i < z.size(); ++i) {
                        z[i] += step * normal(rng);
                    }
                    z = prob.project_z(z);
                }
                BoundPoint cand = make(std::move(x), std::move(z), cur.t);
                if ((cand.s > 0.0) != want_s || (cand.e > 0.0) != want_e) {
                    step *= 0.9;
                    continue;
                }
                const double sc = score(cand);
                if (sc > cur_score) {
                    cur = std::move(cand);
                    cur_score = sc;
                    step *= 1.5;
                } else {
                    step *= 0.9;
                }
            }
            found.push_back(std::move(cur));
        }
        for (auto& f : found) {
            pts.push_back(std::move(f));
        }
    };

    // alpha_hi: sup of V / sigma along the state axis, plus the configured slack.
    refine([](const BoundPoint& p) { return p.V / p.s; }, true, false);
    double axis_alpha = 0.0;
    for (const auto& p : pts) {
        if (p.e == 0.0 && p.s > 0.0) {
            axis_alpha = std::max(axis_alpha, p.V / p.s);
        } else if (p.e == 0.0 && p.s == 0.0 && p.V > 1e-12) {
            throw CertificationError("a sample has positive value with zero bound features");
        }
    }
    out.alpha_hi = std::max(a, axis_alpha) * (1.0 + opt.alpha_slack);

    // gamma_bar: the largest energy coefficient any evaluated point requires at that alpha_hi.
    const double alpha = out.alpha_hi;
    auto required_gamma = [alpha](const BoundPoint& p) { return (p.V - alpha * p.s) / p.e; };
    refine(required_gamma, false, true);
    refine(required_gamma, true, true);
    double gamma = g;
    for (const auto& p : pts) {
        if (p.e > 0.0) {
            gamma = std::max(gamma, required_gamma(p));
        }
    }
    out.gamma_bar = gamma;
    out.inflation = g > 0.0 ? gamma / g : 1.0;

    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }

    // Ratios that keep growing with the radius mean no finite constants exist.
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return ratio(pts[i], out.alpha_hi, out.gamma_bar) > ratio(pts[j], out.alpha_hi, out.gamma_bar);
    });
    double worst_scaled = 0.0;
    for (std::size_t k = 0; k < std::min<std::size_t>(order.size(), 10); ++k) {
        const BoundPoint& p = pts[order[k]];
        BoundPoint scaled = make(State(10.0 * p.x), Eigen::VectorXd(10.0 * p.z), p.t);
        worst_scaled = std::max(worst_scaled, ratio(scaled, out.alpha_hi, out.gamma_bar));
    }
    if (worst_scaled > 1.0 + opt.growth_tolerance) {
        std::ostringstream msg;
        msg << "value ratio grows with radius (" << worst_scaled
            << " at 10x the sampled radius); no finite (alpha_hi, gamma_bar) certified";
        throw CertificationError(msg.str());
    }
    return out;
}

} // namespace

ValueBounds certify_value_bounds(const SystemModel& model, const CostModel& costs, const Box& box,
                                 int M, const ValueBoundOptions& options) {
    if (M < 1) {
        throw ConfigError("horizon must be at least 1");
    }
    const int n = model.state_dim();
    const int free = M - 1;
    BoundProblem prob;
    prob.n = n;
    prob.z_dim = n * free;
    prob.t_end = costs.horizon_end();
    prob.sigma = [&costs](const State& x) { return costs.sigma(x); };
    prob.energy = [](const Eigen::VectorXd& z) { return z.squaredNorm(); };
    const double rw = options.disturbance_radius;
    prob.project_z = [n, free, rw](const Eigen::VectorXd& z) {
        Eigen::VectorXd out = z;
        for (int k = 0; k < free; ++k) {
            out.segment(k * n, n) = project_ball(z.segment(k * n, n), rw);
        }
        return out;
    };
    prob.draw_z = [n, free, rw](std::mt19937_64& rng) {
        Eigen::VectorXd z(n * free);
        for (int k = 0; k < free; ++k) {
            z.segment(k * n, n) = random_ball(rng, n, rw);
        }
        return z;
    };
    prob.value = [&, n, free, M](const State& x, const Eigen::VectorXd& z, int t) {
        DisturbanceSequence W(static_cast<std::size_t>(M), Disturbance::Zero(n));
        for (int k = 0; k < free; ++k) {
            W[static_cast<std::size_t>(k)] = z.segment(k * n, n);
        }
        return solve_horizon(model, costs, box, t, x, W, M, model.theta().values, options.solver).value;
    };
    return fit_bounds(prob, options);
}

ValueBounds certify_minmax_value_bounds(const SystemModel& model, const CostModel& costs,
                                        const Box& box, int M, double w_c,
                                        const ValueBoundOptions& options,
                                        const MinMaxOptions& minmax) {
    if (!(w_c > 0.0)) {
        throw ConfigError("worst-case value bounds need w_c > 0");
    }
    BoundProblem prob;
    prob.n = model.state_dim();
    prob.z_dim = 1;
    prob.t_end = costs.horizon_end();
    prob.sigma = [&costs](const State& x) { return costs.sigma(x); };
    prob.energy = [](const Eigen::VectorXd& z) { return z[0] * z[0]; };
    prob.project_z = [w_c](const Eigen::VectorXd& z) {
        Eigen::VectorXd out(1);
        out[0] = std::clamp(std::abs(z[0]), 0.0, w_c);
        return out;
    };
    prob.draw_z = [w_c](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        Eigen::VectorXd z(1);
        z[0] = w_c * (1.0 - unit(rng));
        return z;
    };
    prob.value = [&, M](const State& x, const Eigen::VectorXd& z, int t) {
        return solve_minmax(model, costs, box, t, x, M, std::abs(z[0]), model.theta().values, minmax)
            .value;
    };
    ValueBoundOptions opt = options;
    opt.disturbance_radius = w_c;
    return fit_bounds(prob, opt);
}

ThetaLipschitz estimate_theta_lipschitz(const SystemModel& model, const CostModel& costs,
                                        const Box& box, int M, double theta_radius,
                                        const ValueBoundOptions& options) {
    if (!(theta_radius > 0.0)) {
        throw ConfigError("parameter perturbation radius must be positive");
    }
    const int n = model.state_dim();
    const Eigen::VectorXd& theta = model.theta().values;
    std::mt19937_64 rng(options.seed ^ 0xa5a5a5a5ULL);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    std::uniform_int_distribution<int> time(1, costs.horizon_end());
    ThetaLipschitz out;
    for (int i = 0; i < options.samples; ++i) {
        const State x = random_ball(rng, n, options.state_radius);
        DisturbanceSequence W(static_cast<std::size_t>(M), Disturbance::Zero(n));
        for (int k = 0; k + 1 < M; ++k) {
            W[static_cast<std::size_t>(k)] = random_ball(rng, n, options.disturbance_radius);
        }
        Eigen::VectorXd dir = random_ball(rng, static_cast<int>(theta.size()), 1.0);
        if (dir.norm() == 0.0) {
            continue;
        }
        const double delta = theta_radius * unit(rng);
        const Eigen::VectorXd perturbed = theta + dir * (delta / dir.norm());
        const int t = time(rng);
        const HorizonSolution a = solve_horizon(model, costs, box, t, x, W, M, theta, options.solver);
        const HorizonSolution b =
            solve_horizon(model, costs, box, t, x, W, M, perturbed, options.solver);
        out.alpha_V = std::max(out.alpha_V, std::abs(b.value - a.value) / delta);
        out.alpha_kappa =
            std::max(out.alpha_kappa, (b.controls.front() - a.controls.front()).norm() / delta);
        ++out.samples;
    }
    return out;
}

} // namespace rhc
