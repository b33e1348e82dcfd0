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
#include "rhc_harness/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rhc::harness {

using nlohmann::json;

namespace {

/// Default last costed time; costs are defined well past any run so horizons never clip.
constexpr int kDefaultCostHorizon = 1000000;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw ConfigError("scenario key '" + key + "': " + what);
}

const json* find(const json& obj, const std::string& key) {
    if (!obj.is_object()) {
        return nullptr;
    }
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) {
        bad(key, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        bad(key, "expected a finite number");
    }
    return d;
}

double number_or(const json& obj, const std::string& key, double fallback) {
    const json* v = find(obj, key);
    return v ? number(*v, key) : fallback;
}

std::optional<double> optional_number(const json& obj, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) {
        return std::nullopt;
    }
    return number(*v, key);
}

int integer(const json& v, const std::string& key) {
    const double d = number(v, key);
    if (d != std::floor(d) || std::abs(d) > 2e9) {
        bad(key, "expected an integer");
    }
    return static_cast<int>(d);
}

int integer_or(const json& obj, const std::string& key, int fallback) {
    const json* v = find(obj, key);
    return v ? integer(*v, key) : fallback;
}

std::uint64_t seed_value(const json& v, const std::string& key) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        bad(key, "expected a nonnegative integer seed");
    }
    return v.get<std::uint64_t>();
}

Eigen::VectorXd vector(const json& v, const std::string& key) {
    if (v.is_number()) {
        return Eigen::VectorXd::Constant(1, number(v, key));
    }
    if (!v.is_array() || v.empty()) {
        bad(key, "expected a nonempty array of numbers");
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = number(v[i], key);
    }
    return out;
}

Eigen::MatrixXd matrix(const json& v, const std::string& key) {
    if (v.is_number()) {
        return Eigen::MatrixXd::Constant(1, 1, number(v, key));
    }
    if (!v.is_array() || v.empty()) {
        bad(key, "expected a matrix as an array of rows");
    }
    if (!v.front().is_array()) {
        // A flat array is a column.
        return vector(v, key);
    }
    const std::size_t cols = v.front().size();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < v.size(); ++r) {
        if (!v[r].is_array() || v[r].size() != cols) {
            bad(key, "rows must have equal length");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(v[r][c], key);
        }
    }
    return out;
}

const json& section(const json& doc, const std::string& key) {
    const json* s = find(doc, key);
    if (!s) {
        bad(key, "missing section");
    }
    if (!s->is_object()) {
        bad(key, "expected an object");
    }
    return *s;
}

ControllerKind controller_from(const std::string& name) {
    for (auto kind : {ControllerKind::KnownPreview, ControllerKind::UnknownPreview, ControllerKind::MinMax}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    bad("controller", "unknown controller '" + name + "' (known_preview, unknown_preview, minmax)");
}

DisturbanceSpec parse_disturbance(const json& d, bool& seed_explicit) {
    DisturbanceSpec s;
    const json* kind = find(d, "kind");
    if (!kind || !kind->is_string()) {
        bad("disturbance.kind", "expected a string");
    }
    s.kind = disturbance_kind_from_string(kind->get<std::string>());
    s.w_c = number_or(d, "w_c", 0.0);
    s.amplitude = optional_number(d, "amplitude");
    s.period = number_or(d, "period", s.period);
    s.phase = number_or(d, "phase", 0.0);
    s.flip_interval = integer_or(d, "flip_interval", 1);
    s.impulse_time = integer_or(d, "impulse_time", 1);
    if (const json* dir = find(d, "direction")) {
        s.direction = vector(*dir, "disturbance.direction");
    }
    if (const json* seed = find(d, "seed")) {
        s.seed = seed_value(*seed, "disturbance.seed");
        seed_explicit = true;
    }
    if (const json* seq = find(d, "sequence")) {
        if (!seq->is_array()) {
            bad("disturbance.sequence", "expected an array");
        }
        for (const auto& w : *seq) {
            s.sequence.push_back(vector(w, "disturbance.sequence"));
        }
    }
    return s;
}

} // namespace

Scenario parse_scenario(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("scenario must be a JSON object");
    }
    Scenario s;
    s.document = doc;
    if (const json* name = find(doc, "name")) {
        s.name = name->get<std::string>();
    }
    if (const json* seed = find(doc, "seed")) {
        s.seed = seed_value(*seed, "seed");
    }

    s.system = section(doc, "system");
    s.cost = section(doc, "cost");
    if (const json* box = find(doc, "control_box")) {
        s.box = *box;
    }

    const json* controller = find(doc, "controller");
    if (!controller || !controller->is_string()) {
        bad("controller", "expected one of known_preview, unknown_preview, minmax");
    }
    s.controller = controller_from(controller->get<std::string>());

    const json& run = section(doc, "run");
    if (const json* T = find(run, "T")) {
        s.run.T = integer(*T, "run.T");
    } else {
        bad("run.T", "missing");
    }
    const json* M = find(run, "M");
    if (!M) {
        bad("run.M", "missing (an integer or \"auto\")");
    }
    if (M->is_string()) {
        if (M->get<std::string>() != "auto") {
            bad("run.M", "expected an integer or \"auto\"");
        }
        s.auto_horizon = true;
        s.run.M = 2;
    } else {
        s.run.M = integer(*M, "run.M");
    }
    if (const json* N = find(run, "N")) {
        s.run.N = integer(*N, "run.N");
    }
    if (const json* grid = find(run, "gamma_grid")) {
        for (const auto& g : *grid) {
            s.run.gamma_grid.push_back(number(g, "run.gamma_grid"));
        }
    }
    s.run.state_ceiling = number_or(run, "state_ceiling", s.run.state_ceiling);
    s.run.t_start = integer_or(run, "t_start", 1);
    const json* x1 = find(run, "x1");
    if (!x1) {
        bad("run.x1", "missing initial state");
    }
    s.x1 = vector(*x1, "run.x1");

    s.disturbance = parse_disturbance(section(doc, "disturbance"), s.disturbance_seed_explicit);

    if (const json* est = find(doc, "estimator")) {
        EstimatorSpec e;
        if (const json* kind = find(*est, "kind")) {
            e.kind = kind->get<std::string>();
        }
        if (e.kind != "least_squares" && e.kind != "synthetic") {
            bad("estimator.kind", "expected least_squares or synthetic");
        }
        e.c_g = number_or(*est, "c_g", e.c_g);
        if (const json* seed = find(*est, "seed")) {
            e.seed = seed_value(*seed, "estimator.seed");
        }
        s.estimator = e;
    }
    if (const json* mm = find(doc, "minmax")) {
        s.minmax_w_c = optional_number(*mm, "w_c");
        s.minmax_options.tolerance = number_or(*mm, "tolerance", s.minmax_options.tolerance);
        s.minmax_options.max_outer_iterations =
            integer_or(*mm, "max_outer_iterations", s.minmax_options.max_outer_iterations);
    }

    if (const json* c = find(doc, "constants")) {
        auto& o = s.constants;
        o.alpha_hi = optional_number(*c, "alpha_hi");
        o.gamma_bar = optional_number(*c, "gamma_bar");
        o.alpha_W = optional_number(*c, "alpha_W");
        o.gamma_bar_W = optional_number(*c, "gamma_bar_W");
        o.alpha_V = optional_number(*c, "alpha_V");
        o.alpha_kappa = optional_number(*c, "alpha_kappa");
        o.eps_tilde = optional_number(*c, "eps_tilde");
        o.a = optional_number(*c, "a");
        o.theta_radius = optional_number(*c, "theta_radius");
        if (const json* H = find(*c, "H")) {
            o.H = integer(*H, "constants.H");
        }
        o.Gamma_V = optional_number(*c, "Gamma_V");
        o.Gamma_gamma_V = optional_number(*c, "Gamma_gamma_V");
        if (o.alpha_hi.has_value() != o.gamma_bar.has_value()) {
            bad("constants", "alpha_hi and gamma_bar must be given together");
        }
        if (o.alpha_W.has_value() != o.gamma_bar_W.has_value()) {
            bad("constants", "alpha_W and gamma_bar_W must be given together");
        }
    }

    if (const json* c = find(doc, "certification")) {
        auto& v = s.certification;
        v.samples = integer_or(*c, "samples", v.samples);
        if (const json* seed = find(*c, "seed")) {
            v.seed = seed_value(*seed, "certification.seed");
            s.certification_seed_explicit = true;
        }
        v.state_radius = number_or(*c, "state_radius", v.state_radius);
        v.disturbance_radius = number_or(*c, "disturbance_radius", v.disturbance_radius);
        v.refine_starts = integer_or(*c, "refine_starts", v.refine_starts);
        v.refine_iterations = integer_or(*c, "refine_iterations", v.refine_iterations);
        v.growth_tolerance = number_or(*c, "growth_tolerance", v.growth_tolerance);
        v.alpha_slack = number_or(*c, "alpha_slack", v.alpha_slack);
        s.envelope_H_max = integer_or(*c, "envelope_H_max", s.envelope_H_max);
    }

    if (const json* sol = find(doc, "solver")) {
        s.solver.tolerance = number_or(*sol, "tolerance", s.solver.tolerance);
        s.solver.max_iterations = integer_or(*sol, "max_iterations", s.solver.max_iterations);
    }
    s.minmax_options.inner_solver = s.solver;

    if (const json* sw = find(doc, "sweep")) {
        s.sweep.present = true;
        if (const json* grid = find(*sw, "grid")) {
            if (!grid->is_object()) {
                bad("sweep.grid", "expected an object of parameter arrays");
            }
            // nlohmann::json sorts object keys, so grid order is alphabetical and stable.
            for (auto it = grid->begin(); it != grid->end(); ++it) {
                std::vector<double> values;
                for (const auto& v : it.value()) {
                    values.push_back(number(v, "sweep.grid." + it.key()));
                }
                s.sweep.grid.emplace_back(it.key(), std::move(values));
            }
        }
        if (const json* g = find(*sw, "gamma")) {
            for (const auto& v : *g) {
                s.sweep.gamma.push_back(number(v, "sweep.gamma"));
            }
        }
        if (const json* g = find(*sw, "gamma_c_multiples")) {
            for (const auto& v : *g) {
                s.sweep.gamma_c_multiples.push_back(number(v, "sweep.gamma_c_multiples"));
            }
        }
    }

    // Referential completeness.
    if (s.controller == ControllerKind::UnknownPreview && !s.estimator) {
        bad("estimator", "the unknown_preview controller needs an estimator");
    }
    if (s.controller == ControllerKind::UnknownPreview && !s.run.N) {
        bad("run.N", "the unknown_preview controller needs an estimation length");
    }
    if (s.controller == ControllerKind::MinMax && !s.minmax_w_c) {
        bad("minmax.w_c", "the minmax controller needs a disturbance bound");
    }
    if (s.auto_horizon && s.controller == ControllerKind::MinMax && s.constants.alpha_W) {
        bad("run.M", "\"auto\" needs certified constants, not fixed alpha_W overrides");
    }
    apply_seed(s, s.seed);
    s.disturbance.dim = static_cast<int>(s.x1.size());
    s.disturbance.validate();
    if (!s.auto_horizon) {
        s.run.validate(s.controller);
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(doc);
}

void apply_seed(Scenario& s, std::uint64_t seed) {
    s.seed = seed;
    s.run.seed = seed;
    if (!s.disturbance_seed_explicit) {
        s.disturbance.seed = seed;
    }
    if (!s.certification_seed_explicit) {
        s.certification.seed = seed + 1;
    }
}

void apply_parameter(Scenario& s, const std::string& name, double value) {
    auto as_int = [&](double v) {
        if (v != std::floor(v)) {
            throw ConfigError("sweep parameter '" + name + "' needs integer values");
        }
        return static_cast<int>(v);
    };
    if (name == "T") {
        s.run.T = as_int(value);
    } else if (name == "M") {
        s.run.M = as_int(value);
        s.auto_horizon = false;
    } else if (name == "N") {
        s.run.N = as_int(value);
    } else if (name == "seed") {
        if (value < 0 || value != std::floor(value)) {
            throw ConfigError("sweep seeds must be nonnegative integers");
        }
        apply_seed(s, static_cast<std::uint64_t>(value));
    } else if (name == "w_c") {
        s.disturbance.w_c = value;
        if (s.minmax_w_c) {
            s.minmax_w_c = value;
        }
    } else if (name == "c_g") {
        if (!s.estimator) {
            throw ConfigError("sweep parameter c_g needs an estimator");
        }
        s.estimator->c_g = value;
    } else if (name == "x1_scale") {
        s.x1 *= value;
    } else {
        throw ConfigError("unknown sweep parameter '" + name + "' (T, M, N, seed, w_c, c_g, x1_scale)");
    }
}

Plant build_plant(const Scenario& s) {
    Plant p;
    const json& sys = s.system;
    const json* kind = find(sys, "kind");
    const std::string k = kind ? kind->get<std::string>() : "linear";
    if (k == "linear") {
        const json* A = find(sys, "A");
        const json* B = find(sys, "B");
        if (!A || !B) {
            bad("system", "linear systems need A and B");
        }
        p.model = std::make_shared<LinearSystem>(matrix(*A, "system.A"), matrix(*B, "system.B"));
    } else if (k == "cubic_drift") {
        p.model = LinearInParamsSystem::cubic_drift(number_or(sys, "theta", 0.1),
                                                    number_or(sys, "theta_bound", 1.0),
                                                    number_or(sys, "alpha_f", 1.0));
    } else if (k == "pendulum") {
        p.model = LinearInParamsSystem::damped_pendulum(
            number_or(sys, "gravity", 9.81), number_or(sys, "damping", 0.1), number_or(sys, "dt", 0.05),
            number_or(sys, "theta_bound", 20.0), number_or(sys, "alpha_f", 1.0));
    } else {
        bad("system.kind", "unknown system '" + k + "' (linear, cubic_drift, pendulum)");
    }
    if (p.model->state_dim() != s.x1.size()) {
        bad("run.x1", "dimension disagrees with the system");
    }

    const json& c = s.cost;
    const json* Q = find(c, "Q");
    const json* R = find(c, "R");
    if (!Q || !R) {
        bad("cost", "quadratic costs need Q and R");
    }
    QuadraticCost::Options opt;
    opt.modulation_amplitude = number_or(c, "modulation_amplitude", 0.0);
    opt.modulation_period = number_or(c, "modulation_period", 20.0);
    opt.operating_radius = number_or(c, "operating_radius", opt.operating_radius);
    if (const json* sigma = find(c, "sigma")) {
        const auto name = sigma->get<std::string>();
        if (name == "squared_norm") {
            opt.sigma = SigmaKind::SquaredNorm;
        } else if (name == "quadratic_form") {
            opt.sigma = SigmaKind::QuadraticForm;
        } else {
            bad("cost.sigma", "expected squared_norm or quadratic_form");
        }
    }
    const int t_end = integer_or(c, "horizon_end", kDefaultCostHorizon);
    p.costs = std::make_shared<QuadraticCost>(matrix(*Q, "cost.Q"), matrix(*R, "cost.R"), t_end, opt);

    const int m = p.model->control_dim();
    if (s.box.is_null()) {
        p.box = Box::unbounded(m);
    } else if (const json* bound = find(s.box, "bound")) {
        p.box = Box::symmetric(m, number(*bound, "control_box.bound"));
    } else {
        const json* lo = find(s.box, "lower");
        const json* hi = find(s.box, "upper");
        if (!lo || !hi) {
            bad("control_box", "expected {bound} or {lower, upper}");
        }
        p.box = Box{vector(*lo, "control_box.lower"), vector(*hi, "control_box.upper")};
    }
    p.box.validate();
    if (p.box.dim() != m) {
        bad("control_box", "dimension disagrees with the system's inputs");
    }
    return p;
}

std::unique_ptr<Estimator> build_estimator(const Scenario& s) {
    if (!s.estimator) {
        throw ConfigError("scenario has no estimator");
    }
    if (s.estimator->kind == "synthetic") {
        return std::make_unique<SyntheticEstimator>(s.estimator->c_g, s.estimator->seed.value_or(s.seed));
    }
    return std::make_unique<LeastSquaresEstimator>();
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("'" + item + "' is not a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos || !std::isfinite(v)) {
            throw ConfigError("'" + item + "' is not a finite number");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<std::pair<std::string, std::vector<double>>> parse_grid_flag(const std::string& text) {
    std::vector<std::pair<std::string, std::vector<double>>> out;
    std::stringstream ss(text);
    std::string entry;
    while (std::getline(ss, entry, ';')) {
        if (entry.empty()) {
            continue;
        }
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("grid entry '" + entry + "' must look like name=v1,v2");
        }
        out.emplace_back(entry.substr(0, eq), parse_double_list(entry.substr(eq + 1)));
    }
    return out;
}

} // namespace rhc::harness
