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
#include "rhc/constants.hpp"

#include "rhc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rhc {

namespace {

void require_alphas(double alpha_lo, double alpha_hi) {
    if (!(alpha_lo > 0.0) || !std::isfinite(alpha_lo)) {
        throw ConfigError("alpha_lo must be positive and finite");
    }
    if (!(alpha_hi >= alpha_lo) || !std::isfinite(alpha_hi)) {
        throw ConfigError("alpha_hi must be finite and at least alpha_lo");
    }
}

void require_horizon(int M) {
    if (M < 2) {
        throw ConfigError("horizon M must be at least 2, got " + std::to_string(M));
    }
}

void require_a(double a) {
    if (!(a > 0.0 && a < 1.0)) {
        throw ConfigError("contraction factor a must lie in (0, 1)");
    }
}

} // namespace

int min_horizon(double alpha_lo, double alpha_hi) {
    require_alphas(alpha_lo, alpha_hi);
    const double bound = alpha_hi * alpha_hi / (alpha_lo * alpha_lo) + 1.0;
    return static_cast<int>(std::floor(bound)) + 1;
}

ValueDecreaseConstants lemma1_constants(double alpha_lo, double alpha_hi, double gamma_bar, int M) {
    require_alphas(alpha_lo, alpha_hi);
    require_horizon(M);
    const double m1 = static_cast<double>(M - 1);
    return {alpha_hi * alpha_hi / (alpha_lo * m1) - alpha_lo,
            gamma_bar * (alpha_hi / (alpha_lo * m1) + 1.0)};
}

double eps_tilde_sup(double alpha_lo, double alpha_hi, int M) {
    require_alphas(alpha_lo, alpha_hi);
    require_horizon(M);
    return alpha_lo - alpha_hi * alpha_hi / (static_cast<double>(M - 1) * alpha_lo);
}

ContractionChoice choose_a(double alpha_lo, double alpha_hi, int M, std::optional<double> eps_tilde,
                           std::optional<double> a) {
    require_alphas(alpha_lo, alpha_hi);
    require_horizon(M);
    ContractionChoice out;
    out.eps_tilde_max = eps_tilde_sup(alpha_lo, alpha_hi, M);
    if (!(out.eps_tilde_max > 0.0)) {
        std::ostringstream detail;
        detail << "no eps_tilde exists in (0, " << out.eps_tilde_max << ")";
        throw HorizonThresholdError(M, min_horizon(alpha_lo, alpha_hi), detail.str());
    }
    out.eps_tilde = eps_tilde.value_or(0.8 * out.eps_tilde_max);
    if (!(out.eps_tilde > 0.0 && out.eps_tilde < out.eps_tilde_max)) {
        std::ostringstream msg;
        msg << "eps_tilde=" << out.eps_tilde << " must lie in (0, " << out.eps_tilde_max << ")";
        throw ConfigError(msg.str());
    }
    const double a_min = 1.0 - out.eps_tilde / alpha_hi;
    out.a = a.value_or(a_min);
    if (!(out.a < 1.0 && out.a >= a_min)) {
        std::ostringstream msg;
        msg << "a=" << out.a << " must satisfy " << a_min << " <= a < 1";
        throw ConfigError(msg.str());
    }
    return out;
}

double decay_offset_b(double alpha_lo, double alpha_hi, double gamma_bar) {
    require_alphas(alpha_lo, alpha_hi);
    return gamma_bar * (alpha_lo / alpha_hi + 1.0);
}

double gamma_c(double alpha_lo, double alpha_hi, double gamma_bar, int M, double a) {
    require_horizon(M);
    if (!(a < 1.0)) {
        throw ConfigError("gamma_c needs a < 1");
    }
    const double b = decay_offset_b(alpha_lo, alpha_hi, gamma_bar);
    const double one_minus_a = 1.0 - a;
    return b * (static_cast<double>(M - 1) * one_minus_a + 1.0) / (one_minus_a * one_minus_a);
}

double CostEnvelope::weight(int j) const {
    if (j < t || j > last_index()) {
        return 0.0;
    }
    return weights[static_cast<std::size_t>(j - t)];
}

CostEnvelope lemma2_coefficients(double alpha_hi, double gamma_bar, double b, double a, int M, int H,
                                 int t) {
    require_horizon(M);
    if (H < M) {
        throw ConfigError("envelope offset H=" + std::to_string(H) + " must be at least M=" +
                          std::to_string(M));
    }
    require_a(a);
    CostEnvelope env;
    env.M_lambda = alpha_hi;
    env.lambda = -std::log(a);
    env.t = t;
    env.H = H;
    const double scale = b / (1.0 - a);
    const double head = scale * std::pow(a, H - M) + std::pow(a, H) * gamma_bar;
    for (int j = t; j <= t + H + M - 2; ++j) {
        if (j <= t + M - 1) {
            env.weights.push_back(head);
        } else if (j <= t + H - 1) {
            env.weights.push_back(scale * std::pow(a, t + H - j - 1));
        } else {
            env.weights.push_back(scale);
        }
    }
    return env;
}

double gamma_c_W(double alpha_lo, double alpha_W, double gamma_bar_W, double a) {
    if (!(a < 1.0)) {
        throw ConfigError("gamma_c_W needs a < 1");
    }
    if (!(alpha_lo > 0.0) || !(alpha_W > 0.0)) {
        throw ConfigError("gamma_c_W needs positive alpha_lo and alpha_W");
    }
    return gamma_bar_W / (1.0 - a) * (alpha_lo / alpha_W + 1.0);
}

ThetaConstants theta_constants(double alpha_V, double alpha_kappa, double alpha_c, double alpha_f,
                               double S, int M, double alpha_lo, double alpha_hi, double eps_tilde,
                               double a, int H) {
    require_alphas(alpha_lo, alpha_hi);
    require_horizon(M);
    if (alpha_V < 0.0 || alpha_kappa < 0.0 || alpha_c < 0.0 || alpha_f < 0.0 || S < 0.0) {
        throw ConfigError("Lipschitz inputs and the parameter bound must be nonnegative");
    }
    if (H < 0) {
        throw ConfigError("H must be nonnegative");
    }
    if (!(a >= 0.0 && a < 1.0)) {
        throw ConfigError("contraction factor a must lie in [0, 1)");
    }
    ThetaConstants out;
    out.alpha_V = alpha_V;
    out.alpha_kappa = alpha_kappa;
    out.H = H;
    const double base = alpha_f * S;
    for (int k = 0; k <= M - 2; ++k) {
        out.alpha_tilde_f = std::max(out.alpha_tilde_f, std::pow(base, k + 1));
    }
    const double m1 = static_cast<double>(M - 1);
    const double chain = alpha_c * out.alpha_tilde_f * alpha_kappa * m1;
    out.Gamma_theta_V = 2.0 * alpha_V + chain * (alpha_hi / (alpha_lo * m1) + 1.0);
    out.c = alpha_V * (2.0 + eps_tilde / alpha_hi) + chain * ((alpha_lo - eps_tilde) / alpha_hi + 1.0);
    const double aH = std::pow(a, H);
    out.M_theta = out.c * (1.0 - aH) / (1.0 - a) + aH * alpha_V;
    return out;
}

ValueDecreaseConstants minmax_decrease_constants(double alpha_lo, double alpha_W,
                                                 double gamma_bar_W, int M) {
    require_horizon(M);
    if (!(alpha_lo > 0.0) || !(alpha_W > 0.0)) {
        throw ConfigError("min-max constants need positive alpha_lo and alpha_W");
    }
    const double m1 = static_cast<double>(M - 1);
    return {alpha_W * alpha_W / (m1 * alpha_lo) - alpha_lo,
            gamma_bar_W * (alpha_W / (m1 * alpha_lo) + 1.0)};
}

MinMaxConstants minmax_constants(double alpha_lo, double alpha_W, double gamma_bar_W, int M,
                                 std::optional<double> gamma_bar, std::optional<double> eps_tilde,
                                 std::optional<double> a) {
    require_alphas(alpha_lo, alpha_W);
    MinMaxConstants out;
    out.alpha_W = alpha_W;
    out.gamma_bar_W = gamma_bar_W;
    if (gamma_bar) {
        out.gamma_bar_times_M = *gamma_bar * M;
    }
    out.M_min = min_horizon(alpha_lo, alpha_W);
    const ContractionChoice choice = choose_a(alpha_lo, alpha_W, M, eps_tilde, a);
    out.eps_tilde_max = choice.eps_tilde_max;
    out.eps_tilde = choice.eps_tilde;
    out.a = choice.a;
    const ValueDecreaseConstants d = minmax_decrease_constants(alpha_lo, alpha_W, gamma_bar_W, M);
    out.Gamma_W_V = d.Gamma_V;
    out.Gamma_gamma_W_V = d.Gamma_gamma_V;
    out.gamma_c_W = gamma_c_W(alpha_lo, alpha_W, gamma_bar_W, out.a);
    return out;
}

std::optional<double> tilde_gamma(double alpha_lo, double alpha_hi) {
    require_alphas(alpha_lo, alpha_hi);
    const double r = alpha_hi * alpha_hi / (alpha_lo * alpha_lo);
    const double ceil_r = std::ceil(r);
    const double denom = alpha_hi * (ceil_r / r - 1.0);
    const double value = ceil_r * alpha_lo / denom;
    if (!std::isfinite(value) || denom == 0.0) {
        return std::nullopt;
    }
    return value;
}

ConstantsReport compute_constants(double alpha_lo, double alpha_hi, double gamma_bar, int M,
                                  std::optional<double> eps_tilde, std::optional<double> a) {
    require_alphas(alpha_lo, alpha_hi);
    if (!(gamma_bar >= 0.0) || !std::isfinite(gamma_bar)) {
        throw ConfigError("gamma_bar must be finite and nonnegative");
    }
    ConstantsReport r;
    r.alpha_lo = alpha_lo;
    r.alpha_hi = alpha_hi;
    r.gamma_bar = gamma_bar;
    r.M = M;
    r.M_min = min_horizon(alpha_lo, alpha_hi);
    const ContractionChoice choice = choose_a(alpha_lo, alpha_hi, M, eps_tilde, a);
    r.eps_tilde_max = choice.eps_tilde_max;
    r.eps_tilde = choice.eps_tilde;
    r.a = choice.a;
    r.b = decay_offset_b(alpha_lo, alpha_hi, gamma_bar);
    const ValueDecreaseConstants d = lemma1_constants(alpha_lo, alpha_hi, gamma_bar, M);
    r.Gamma_V = d.Gamma_V;
    r.Gamma_gamma_V = d.Gamma_gamma_V;
    r.gamma_c = gamma_c(alpha_lo, alpha_hi, gamma_bar, M, r.a);
    r.M_lambda = alpha_hi;
    r.lambda = -std::log(r.a);
    r.tilde_gamma = tilde_gamma(alpha_lo, alpha_hi);
    return r;
}

double attenuation_regret(double total_cost, double energy, double gamma) {
    if (!(gamma >= 0.0)) {
        throw ConfigError("attenuation level gamma must be nonnegative");
    }
    return std::max(0.0, total_cost - gamma * energy);
}

double attenuation_regret(const Trajectory& trajectory, double gamma, int from_t) {
    if (from_t <= 1) {
        return attenuation_regret(trajectory.total_cost(), trajectory.energy(), gamma);
    }
    return attenuation_regret(trajectory.cost_from(from_t), trajectory.energy_from(from_t), gamma);
}

} // namespace rhc
