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
#ifndef RHC_CONSTANTS_HPP
#define RHC_CONSTANTS_HPP

#include "rhc/trajectory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rhc {

/// Smallest integer M with M > alpha_hi^2 / alpha_lo^2 + 1.
int min_horizon(double alpha_lo, double alpha_hi);

struct ValueDecreaseConstants {
    double Gamma_V = 0.0;
    double Gamma_gamma_V = 0.0;
};

/// Gamma_V = hi^2/(lo(M-1)) - lo and Gamma^gamma_V = gamma_bar (hi/(lo(M-1)) + 1).
ValueDecreaseConstants lemma1_constants(double alpha_lo, double alpha_hi, double gamma_bar, int M);

/// lo - hi^2/((M-1) lo); positive exactly when M > hi^2/lo^2 + 1.
double eps_tilde_sup(double alpha_lo, double alpha_hi, int M);

struct ContractionChoice {
    double eps_tilde_max = 0.0;
    double eps_tilde = 0.0;
    double a = 0.0;
};

/**
 * @brief Picks (eps_tilde, a) with 0 < eps_tilde < eps_tilde_max and 1 > a >= 1 - eps_tilde / hi.
 *
 * Defaults: eps_tilde = 0.8 eps_tilde_max and a at its lower end. Throws
 * HorizonThresholdError when the interval is empty and ConfigError when an
 * override falls outside it.
 */
ContractionChoice choose_a(double alpha_lo, double alpha_hi, int M,
                           std::optional<double> eps_tilde = std::nullopt,
                           std::optional<double> a = std::nullopt);

/// b = gamma_bar (lo/hi + 1).
double decay_offset_b(double alpha_lo, double alpha_hi, double gamma_bar);

/// gamma_c = b((M-1)(1-a)+1)/(1-a)^2.
double gamma_c(double alpha_lo, double alpha_hi, double gamma_bar, int M, double a);

/**
 * @brief Coefficients of the per-step cost envelope
 * c_{t+H} <= M_lambda e^{-lambda H} sigma(x_t) + sum_j M_{w,j} ||w_j||^2.
 *
 * weights[j - t] covers j = t..t+H+M-2.
 */
struct CostEnvelope {
    double M_lambda = 0.0;
    double lambda = 0.0;
    int t = 0;
    int H = 0;
    std::vector<double> weights;

    double weight(int j) const;
    int last_index() const { return t + static_cast<int>(weights.size()) - 1; }
};

CostEnvelope lemma2_coefficients(double alpha_hi, double gamma_bar, double b, double a, int M, int H,
                                 int t);

/// gamma_{c,W} = gamma_bar_W/(1-a) (lo/alpha_W + 1).
double gamma_c_W(double alpha_lo, double alpha_W, double gamma_bar_W, double a);

struct ThetaConstants {
    double alpha_V = 0.0;
    double alpha_kappa = 0.0;
    double alpha_tilde_f = 0.0;
    double Gamma_theta_V = 0.0;
    double c = 0.0;
    double M_theta = 0.0;
    int H = 0;
};

/**
 * @brief Parameter-error sensitivities of the estimated-system controller.
 *
 * alpha_tilde_f = max_{0<=k<=M-2} (alpha_f S)^{k+1};
 * c = alpha_V(2 + eps/hi) + alpha_c alpha_tilde_f alpha_kappa (M-1)((lo - eps)/hi + 1);
 * M_theta = c(1 - a^H)/(1 - a) + a^H alpha_V.
 */
ThetaConstants theta_constants(double alpha_V, double alpha_kappa, double alpha_c, double alpha_f,
                               double S, int M, double alpha_lo, double alpha_hi, double eps_tilde,
                               double a, int H);

struct MinMaxConstants {
    double alpha_W = 0.0;
    double gamma_bar_W = 0.0;
    /// gamma_bar * M, the a-priori relation between the two attenuation bounds.
    std::optional<double> gamma_bar_times_M;
    int M_min = 0;
    double eps_tilde_max = 0.0;
    double eps_tilde = 0.0;
    double a = 0.0;
    double Gamma_W_V = 0.0;
    double Gamma_gamma_W_V = 0.0;
    double gamma_c_W = 0.0;
};

/// Constants of the worst-case controller; throws HorizonThresholdError when M <= alpha_W^2/lo^2 + 1.
MinMaxConstants minmax_constants(double alpha_lo, double alpha_W, double gamma_bar_W, int M,
                                 std::optional<double> gamma_bar = std::nullopt,
                                 std::optional<double> eps_tilde = std::nullopt,
                                 std::optional<double> a = std::nullopt);

/// Value-decrease constants of the worst-case controller; needs only M >= 2.
ValueDecreaseConstants minmax_decrease_constants(double alpha_lo, double alpha_W,
                                                 double gamma_bar_W, int M);

/// Diagnostic ceil(r) lo / (hi (ceil(r)/r - 1)) with r = hi^2/lo^2; empty when not finite.
std::optional<double> tilde_gamma(double alpha_lo, double alpha_hi);

/**
 * @brief Every derived constant of a scenario.
 *
 * provenance records where (alpha_hi, gamma_bar) came from: "configured" or
 * "certified" (sample-based).
 */
struct ConstantsReport {
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double gamma_bar = 0.0;
    int M = 0;
    int M_min = 0;
    double eps_tilde_max = 0.0;
    double eps_tilde = 0.0;
    double a = 0.0;
    double b = 0.0;
    double Gamma_V = 0.0;
    double Gamma_gamma_V = 0.0;
    double gamma_c = 0.0;
    double M_lambda = 0.0;
    double lambda = 0.0;
    std::optional<double> tilde_gamma;
    std::optional<ThetaConstants> theta;
    std::optional<MinMaxConstants> minmax;
    std::string provenance = "configured";
};

/// Fills the known-system block; throws HorizonThresholdError below the threshold.
ConstantsReport compute_constants(double alpha_lo, double alpha_hi, double gamma_bar, int M,
                                  std::optional<double> eps_tilde = std::nullopt,
                                  std::optional<double> a = std::nullopt);

/// (total_cost - gamma * energy)_+ over records with t >= from_t.
double attenuation_regret(const Trajectory& trajectory, double gamma, int from_t = 1);

/// (total - gamma * energy)_+.
double attenuation_regret(double total_cost, double energy, double gamma);

} // namespace rhc

#endif // RHC_CONSTANTS_HPP
