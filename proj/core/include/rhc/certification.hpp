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
#ifndef RHC_CERTIFICATION_HPP
#define RHC_CERTIFICATION_HPP

#include "rhc/constants.hpp"
#include "rhc/cost.hpp"
#include "rhc/minmax_solver.hpp"
#include "rhc/model.hpp"
#include "rhc/trajectory.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace rhc {

/// Which per-step value-decrease inequality a trajectory is checked against.
enum class DecreaseCheck {
    /// Known system with preview: Gamma_V sigma + Gamma^gamma_V * window energy.
    Preview,
    /// Estimated system: the preview bound plus Gamma^theta_V ||theta_hat - theta||.
    EstimatedPreview,
    /// No preview: Gamma_{W,V} sigma + Gamma^gamma_{W,V} w_c^2.
    MinMax,
};

std::string to_string(DecreaseCheck which);

/**
 * @brief Per-step residuals LHS - RHS of an inequality; a pass needs every residual <= tolerance.
 */
struct CertificationReport {
    std::string check;
    std::vector<int> steps;
    std::vector<double> residuals;
    double max_residual = -std::numeric_limits<double>::infinity();
    std::vector<int> violations;
    double tolerance = 1e-6;
    /// "certified" or "empirical", after the provenance of the constants used.
    std::string label;

    bool passed() const { return violations.empty(); }
    void add(int t, double residual);
};

/// 1e-6, scaled by max|V|/1e3 once recorded values exceed 1e3.
double residual_tolerance(double value_scale);

/**
 * @brief Checks V^{t+1} - V^t <= RHS at every step with both values recorded.
 *
 * The window energy sums ||w_k||^2 for k = t..t+M-1, with zeros beyond the
 * last step. Throws ConfigError when the check does not match the
 * controller that produced the trajectory or when required constants are
 * missing. theta_error defaults to the trajectory's recorded estimate error.
 */
CertificationReport certify_lemma(const Trajectory& trajectory, const CostModel& costs,
                                  DecreaseCheck which,
                                  const ConstantsReport& constants,
                                  std::optional<double> theta_error = std::nullopt);

/**
 * @brief c_{t+H} <= M_lambda e^{-lambda H} sigma(x_t) + sum_j M_{w,j} ||w_j||^2
 * for every start t and every H in [M, H_max] that fits in the trajectory.
 */
CertificationReport check_cost_envelope(const Trajectory& trajectory, const CostModel& costs,
                                        const ConstantsReport& constants, int H_max,
                                        std::optional<int> only_start = std::nullopt);

/// Total cost <= gamma_{c,W} T w_c^2 + alpha_W/(1-a) sigma(x_1).
CertificationReport check_minmax_total(const Trajectory& trajectory, const CostModel& costs,
                                       const ConstantsReport& constants);

struct ValueBoundOptions {
    int samples = 300;
    std::uint64_t seed = 1;
    double state_radius = 2.0;
    double disturbance_radius = 1.0;
    /// (1+1)-ES refinement steps from each of the top samples.
    int refine_starts = 5;
    int refine_iterations = 60;
    /// Reject when the worst ratio at 10x radius exceeds the base ratio by this factor.
    double growth_tolerance = 1e-2;
    /// Relative margin of alpha_hi over the sampled sup of V / sigma. Cross terms between x and W
    /// make gamma_bar unbounded at zero margin.
    double alpha_slack = 0.05;
    SolverOptions solver;
};

struct ValueBounds {
    double alpha_hi = 0.0;
    double gamma_bar = 0.0;
    /// Least-squares pair before inflation.
    double alpha_fit = 0.0;
    double gamma_fit = 0.0;
    /// gamma_bar / gamma_fit.
    double inflation = 1.0;
    int samples = 0;
};

/**
 * @brief Smallest sampled (alpha_hi, gamma_bar) with V^t_M <= alpha_hi sigma(x) + gamma_bar E(W).
 *
 * E(W) sums the M-1 disturbances that reach a costed state. Samples mix
 * state-only, disturbance-only and joint draws at random times. A
 * nonnegative least-squares fit seeds the pair. alpha_hi is the larger of
 * the fit and the locally refined sup of V / sigma, times 1 + alpha_slack.
 * gamma_bar is then raised to the largest (V - alpha_hi sigma) / E over all
 * evaluated points, after a local search for that maximum. Since costs are nonnegative, V at a
 * shorter horizon never exceeds V at M, so the bound covers shorter
 * horizons too.
 */
ValueBounds certify_value_bounds(const SystemModel& model, const CostModel& costs, const Box& box,
                                 int M, const ValueBoundOptions& options = {});

/// As above for the worst-case value with features sigma(x) and w_c^2.
ValueBounds certify_minmax_value_bounds(const SystemModel& model, const CostModel& costs,
                                        const Box& box, int M, double w_c,
                                        const ValueBoundOptions& options = {},
                                        const MinMaxOptions& minmax = {});

struct ThetaLipschitz {
    double alpha_V = 0.0;
    double alpha_kappa = 0.0;
    int samples = 0;
};

/// Empirical sensitivities of V and kappa to the planning parameter over a sampled region.
ThetaLipschitz estimate_theta_lipschitz(const SystemModel& model, const CostModel& costs,
                                        const Box& box, int M, double theta_radius,
                                        const ValueBoundOptions& options = {});

} // namespace rhc

#endif // RHC_CERTIFICATION_HPP
