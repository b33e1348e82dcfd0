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
#include "rhc_harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <cmath>
#include <thread>

namespace rhc::harness {

using nlohmann::json;

namespace {

constexpr int kMaxHorizonSearch = 40;

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json bounds_json(const ValueBounds& b) {
    return {{"alpha_hi", b.alpha_hi}, {"gamma_bar", b.gamma_bar}, {"alpha_fit", b.alpha_fit},
            {"gamma_fit", b.gamma_fit}, {"inflation", b.inflation}, {"samples", b.samples}};
}

ValueBounds certify_for(const Scenario& s, const Plant& p, int M) {
    if (s.controller == ControllerKind::MinMax) {
        return certify_minmax_value_bounds(*p.model, *p.costs, p.box, M, *s.minmax_w_c, s.certification,
                                           s.minmax_options);
    }
    ValueBoundOptions opt = s.certification;
    opt.solver = s.solver;
    return certify_value_bounds(*p.model, *p.costs, p.box, M, opt);
}

} // namespace

ConstantsBundle resolve_constants(Scenario& s, const Plant& p) {
    ConstantsBundle out;
    const double lo = p.costs->alpha_lo();
    const bool minmax = s.controller == ControllerKind::MinMax;
    const auto& o = s.constants;
    const bool configured = minmax ? o.alpha_W.has_value() : o.alpha_hi.has_value();

    double hi = 0.0;
    double gbar = 0.0;
    if (configured) {
        hi = minmax ? *o.alpha_W : *o.alpha_hi;
        gbar = minmax ? *o.gamma_bar_W : *o.gamma_bar;
        if (s.auto_horizon) {
            s.run.M = std::max(2, min_horizon(lo, hi));
        }
        out.horizon_trail.push_back(s.run.M);
    } else {
        int M = std::max(2, s.run.M);
        for (int it = 0;; ++it) {
            const ValueBounds b = certify_for(s, p, M);
            out.horizon_trail.push_back(M);
            const int M_min = min_horizon(lo, b.alpha_hi);
            if (!s.auto_horizon || M >= M_min) {
                hi = b.alpha_hi;
                gbar = b.gamma_bar;
                (minmax ? out.minmax_bounds : out.value_bounds) = b;
                break;
            }
            if (it + 1 >= kMaxHorizonSearch) {
                throw HorizonThresholdError(M, M_min, "automatic horizon search did not settle");
            }
            M = M_min;
        }
        s.run.M = M;
    }
    const int M = s.run.M;

    ConstantsReport& r = out.report;
    if (!minmax) {
        r = compute_constants(lo, hi, gbar, M, o.eps_tilde, o.a);
        r.provenance = configured ? "configured" : "certified";
    } else {
        // Preview constants are only reported next to the worst-case ones, for the gamma_bar * M comparison.
        std::optional<double> preview_gamma = o.gamma_bar;
        if (!preview_gamma) {
            try {
                ValueBoundOptions opt = s.certification;
                opt.solver = s.solver;
                out.value_bounds = certify_value_bounds(*p.model, *p.costs, p.box, M, opt);
                preview_gamma = out.value_bounds->gamma_bar;
            } catch (const CertificationError&) {
                preview_gamma.reset();
            }
        }
        r.alpha_lo = lo;
        r.M = M;
        if (out.value_bounds || o.alpha_hi) {
            r.alpha_hi = o.alpha_hi.value_or(out.value_bounds ? out.value_bounds->alpha_hi : 0.0);
            r.gamma_bar = preview_gamma.value_or(0.0);
            r.M_min = min_horizon(lo, r.alpha_hi);
            r.tilde_gamma = tilde_gamma(lo, r.alpha_hi);
        }
        r.minmax = minmax_constants(lo, hi, gbar, M, preview_gamma, o.eps_tilde, o.a);
        r.eps_tilde_max = r.minmax->eps_tilde_max;
        r.eps_tilde = r.minmax->eps_tilde;
        r.a = r.minmax->a;
        r.provenance = configured ? "configured" : "certified";
    }

    if (s.controller == ControllerKind::UnknownPreview) {
        double alpha_V = o.alpha_V.value_or(0.0);
        double alpha_kappa = o.alpha_kappa.value_or(0.0);
        if (!o.alpha_V || !o.alpha_kappa) {
            const double radius = o.theta_radius.value_or(0.1 * std::max(1.0, p.model->theta().norm()));
            ValueBoundOptions opt = s.certification;
            opt.solver = s.solver;
            out.theta_lipschitz = estimate_theta_lipschitz(*p.model, *p.costs, p.box, M, radius, opt);
            alpha_V = o.alpha_V.value_or(out.theta_lipschitz->alpha_V);
            alpha_kappa = o.alpha_kappa.value_or(out.theta_lipschitz->alpha_kappa);
            r.provenance = "empirical";
        }
        r.theta = theta_constants(alpha_V, alpha_kappa, p.costs->alpha_c(), p.model->alpha_f(),
                                  p.model->theta().bound, M, r.alpha_lo, r.alpha_hi, r.eps_tilde, r.a,
                                  o.H.value_or(M));
    }

    if (o.Gamma_V) {
        r.Gamma_V = *o.Gamma_V;
        if (r.minmax) {
            r.minmax->Gamma_W_V = *o.Gamma_V;
        }
    }
    if (o.Gamma_gamma_V) {
        r.Gamma_gamma_V = *o.Gamma_gamma_V;
        if (r.minmax) {
            r.minmax->Gamma_gamma_W_V = *o.Gamma_gamma_V;
        }
    }
    if (o.Gamma_V || o.Gamma_gamma_V) {
        r.provenance = "overridden";
    }
    return out;
}

RunOutcome execute(Scenario scenario) {
    RunOutcome out;
    const Plant plant = build_plant(scenario);
    out.constants = resolve_constants(scenario, plant);
    scenario.run.validate(scenario.controller);
    scenario.disturbance.validate();
    out.scenario = scenario;

    const ControlProblem problem{*plant.model, *plant.costs, plant.box, scenario.x1};
    try {
        switch (scenario.controller) {
        case ControllerKind::KnownPreview:
            out.trajectory = run_known_preview(problem, scenario.disturbance, scenario.run, scenario.solver);
            break;
        case ControllerKind::UnknownPreview: {
            const auto estimator = build_estimator(scenario);
            out.trajectory =
                run_unknown_preview(problem, scenario.disturbance, *estimator, scenario.run, scenario.solver);
            break;
        }
        case ControllerKind::MinMax:
            out.trajectory = run_minmax_no_preview(problem, scenario.disturbance, *scenario.minmax_w_c,
                                                   scenario.run, scenario.minmax_options);
            break;
        }
    } catch (const DivergenceError& e) {
        out.trajectory = e.partial();
        out.error_kind = "divergence";
        out.error_message = e.what();
        out.exit_code = kExitRuntime;
    } catch (const RankDeficiencyError& e) {
        out.error_kind = "rank_deficiency";
        out.error_message = e.what();
        out.exit_code = kExitRuntime;
    }
    return out;
}

std::vector<double> gamma_levels(const Scenario& scenario, const std::vector<double>& extra) {
    std::vector<double> out = extra.empty() ? scenario.run.gamma_grid : extra;
    for (double g : out) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw ConfigError("attenuation levels must be finite and nonnegative");
        }
    }
    return out;
}

std::optional<double> threshold_gamma(const RunOutcome& o) {
    const auto& r = o.constants.report;
    if (o.scenario.controller == ControllerKind::MinMax) {
        return r.minmax ? std::optional<double>(r.minmax->gamma_c_W) : std::nullopt;
    }
    return r.gamma_c;
}

json metrics_json(const RunOutcome& o, const std::vector<double>& gammas) {
    const Trajectory& traj = o.trajectory;
    const Scenario& s = o.scenario;
    json m;
    m["scenario"] = s.name;
    m["controller"] = to_string(s.controller);
    m["seed"] = s.seed;
    m["T"] = s.run.T;
    m["M"] = s.run.M;
    m["N"] = s.run.N ? json(*s.run.N) : json(nullptr);
    m["steps"] = traj.size();
    m["status"] = o.ok() ? "ok" : o.error_kind;
    m["total_cost"] = traj.total_cost();
    m["total_energy"] = traj.energy();
    m["disturbance"] = {{"kind", to_string(s.disturbance.kind)}, {"w_c", s.disturbance.w_c},
                        {"seed", s.disturbance.seed}};

    const auto threshold = threshold_gamma(o);
    m["threshold_name"] = s.controller == ControllerKind::MinMax ? "gamma_c_W" : "gamma_c";
    m["threshold"] = optional_json(threshold);
    m["gamma_c"] = s.controller == ControllerKind::MinMax ? json(nullptr) : json(o.constants.report.gamma_c);
    if (o.constants.report.minmax) {
        m["gamma_c_W"] = o.constants.report.minmax->gamma_c_W;
    }

    json regret = json::array();
    for (double g : gammas) {
        regret.push_back({{"gamma", g}, {"R_p_T", attenuation_regret(traj, g)}});
    }
    m["regret"] = regret;
    m["regret_at_threshold"] = threshold ? json(attenuation_regret(traj, *threshold)) : json(nullptr);

    const int start = traj.control_phase_start();
    json phase{{"start", start}, {"cost", traj.cost_from(start)}, {"energy", traj.energy_from(start)}};
    phase["regret_at_threshold"] =
        threshold ? json(attenuation_regret(traj, *threshold, start)) : json(nullptr);
    m["control_phase"] = phase;

    if (traj.estimate()) {
        const auto& e = *traj.estimate();
        m["estimate"] = {{"theta_hat", vector_json(e.theta_hat.values)},
                         {"samples", e.samples},
                         {"g_of_N", e.g_of_N},
                         {"actual_error", optional_json(e.actual_error)}};
    }
    m["final_state"] = traj.final_state() ? vector_json(*traj.final_state()) : json(nullptr);
    return m;
}

json constants_json(const RunOutcome& o) {
    const auto& b = o.constants;
    const auto& r = b.report;
    json c{{"seed", o.scenario.seed},
           {"provenance", r.provenance},
           {"alpha_lo", r.alpha_lo},
           {"alpha_hi", r.alpha_hi},
           {"gamma_bar", r.gamma_bar},
           {"M", r.M},
           {"M_min", r.M_min},
           {"eps_tilde_max", r.eps_tilde_max},
           {"eps_tilde", r.eps_tilde},
           {"a", r.a},
           {"b", r.b},
           {"Gamma_V", r.Gamma_V},
           {"Gamma_gamma_V", r.Gamma_gamma_V},
           {"gamma_c", r.gamma_c},
           {"M_lambda", r.M_lambda},
           {"lambda", r.lambda},
           {"tilde_gamma", optional_json(r.tilde_gamma)},
           {"horizon_trail", b.horizon_trail}};
    if (r.theta) {
        const auto& t = *r.theta;
        c["theta"] = {{"alpha_V", t.alpha_V},         {"alpha_kappa", t.alpha_kappa},
                      {"alpha_tilde_f", t.alpha_tilde_f}, {"Gamma_theta_V", t.Gamma_theta_V},
                      {"c", t.c},                     {"M_theta", t.M_theta},
                      {"H", t.H}};
    }
    if (r.minmax) {
        const auto& w = *r.minmax;
        c["minmax"] = {{"alpha_W", w.alpha_W},
                       {"gamma_bar_W", w.gamma_bar_W},
                       {"gamma_bar_times_M", optional_json(w.gamma_bar_times_M)},
                       {"M_min", w.M_min},
                       {"eps_tilde_max", w.eps_tilde_max},
                       {"eps_tilde", w.eps_tilde},
                       {"a", w.a},
                       {"Gamma_W_V", w.Gamma_W_V},
                       {"Gamma_gamma_W_V", w.Gamma_gamma_W_V},
                       {"gamma_c_W", w.gamma_c_W}};
    }
    if (b.value_bounds) {
        c["value_bounds"] = bounds_json(*b.value_bounds);
    }
    if (b.minmax_bounds) {
        c["minmax_value_bounds"] = bounds_json(*b.minmax_bounds);
    }
    if (b.theta_lipschitz) {
        c["theta_lipschitz"] = {{"alpha_V", b.theta_lipschitz->alpha_V},
                                {"alpha_kappa", b.theta_lipschitz->alpha_kappa},
                                {"samples", b.theta_lipschitz->samples}};
    }
    return c;
}

std::vector<CertificationReport> certify(const RunOutcome& o) {
    const Plant plant = build_plant(o.scenario);
    const auto& r = o.constants.report;
    std::vector<CertificationReport> reports;
    switch (o.scenario.controller) {
    case ControllerKind::KnownPreview:
        reports.push_back(certify_lemma(o.trajectory, *plant.costs, DecreaseCheck::Preview, r));
        reports.push_back(check_cost_envelope(o.trajectory, *plant.costs, r, o.scenario.envelope_H_max));
        break;
    case ControllerKind::UnknownPreview:
        reports.push_back(certify_lemma(o.trajectory, *plant.costs, DecreaseCheck::EstimatedPreview, r));
        break;
    case ControllerKind::MinMax:
        reports.push_back(certify_lemma(o.trajectory, *plant.costs, DecreaseCheck::MinMax, r));
        reports.push_back(check_minmax_total(o.trajectory, *plant.costs, r));
        break;
    }
    return reports;
}

json certification_json(const RunOutcome& o, const std::vector<CertificationReport>& reports) {
    json checks = json::array();
    bool passed = true;
    for (const auto& rep : reports) {
        passed = passed && rep.passed();
        json violations = json::array();
        for (std::size_t k = 0; k < rep.violations.size() && k < 100; ++k) {
            violations.push_back(rep.violations[k]);
        }
        checks.push_back({{"check", rep.check},
                          {"passed", rep.passed()},
                          {"max_residual", rep.steps.empty() ? json(nullptr) : json(rep.max_residual)},
                          {"tolerance", rep.tolerance},
                          {"steps_checked", rep.steps.size()},
                          {"violation_count", rep.violations.size()},
                          {"violations", violations},
                          {"label", rep.label}});
    }
    return {{"scenario", o.scenario.name}, {"seed", o.scenario.seed}, {"passed", passed}, {"checks", checks}};
}

SweepResult run_sweep(const Scenario& base,
                      const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                      const std::vector<double>& gammas, unsigned threads) {
    SweepResult result;
    std::size_t cells = grid.empty() ? 0 : 1;
    for (const auto& [name, values] : grid) {
        result.param_names.push_back(name);
        cells *= values.size();
    }
    if (cells == 0) {
        return result;
    }

    std::vector<std::vector<SweepRow>> per_cell(cells);
    auto run_cell = [&](std::size_t cell) {
        std::vector<double> params(grid.size());
        std::size_t rem = cell;
        // Last parameter varies fastest.
        for (std::size_t k = grid.size(); k-- > 0;) {
            const auto& values = grid[k].second;
            params[k] = values[rem % values.size()];
            rem /= values.size();
        }
        SweepRow proto;
        proto.cell = static_cast<int>(cell);
        proto.params = params;
        try {
            Scenario s = base;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                apply_parameter(s, grid[k].first, params[k]);
            }
            proto.seed = s.seed;
            const RunOutcome o = execute(s);
            if (!o.ok()) {
                proto.status = o.error_kind;
                proto.error = o.error_message;
            }
            std::vector<std::pair<std::string, double>> levels;
            for (double g : gammas) {
                levels.emplace_back("fixed", g);
            }
            const auto threshold = threshold_gamma(o);
            if (threshold) {
                const std::string name = o.scenario.controller == ControllerKind::MinMax ? "gamma_c_W" : "gamma_c";
                for (double mult : base.sweep.gamma_c_multiples) {
                    std::ostringstream label;
                    label << mult << "*" << name;
                    levels.emplace_back(label.str(), mult * *threshold);
                }
            }
            const Trajectory& traj = o.trajectory;
            const int start = traj.control_phase_start();
            for (const auto& [label, g] : levels) {
                SweepRow row = proto;
                row.gamma_label = label;
                row.gamma = g;
                row.regret = attenuation_regret(traj, g);
                row.total_cost = traj.total_cost();
                row.total_energy = traj.energy();
                row.control_cost = traj.cost_from(start);
                row.control_energy = traj.energy_from(start);
                row.control_regret = attenuation_regret(traj, g, start);
                per_cell[cell].push_back(std::move(row));
            }
            if (levels.empty()) {
                proto.status = proto.status == "ok" ? "no_gamma" : proto.status;
                per_cell[cell].push_back(proto);
            }
        } catch (const std::exception& e) {
            proto.status = dynamic_cast<const ConfigError*>(&e) ? "config_error" : "error";
            proto.error = e.what();
            per_cell[cell] = {proto};
        }
    };

    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, cells));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < cells; c = next++) {
                run_cell(c);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& rows : per_cell) {
        for (auto& row : rows) {
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

} // namespace rhc::harness
