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
#ifndef RHC_ESTIMATION_HPP
#define RHC_ESTIMATION_HPP

#include "rhc/model.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rhc {

/// One transition (x_{k+1}, x_k, u_k, w_k) observed during the estimation phase.
struct DataTuple {
    State x_next;
    State x;
    Control u;
    Disturbance w;
};

struct Dataset {
    std::vector<DataTuple> tuples;

    int size() const { return static_cast<int>(tuples.size()); }
    void add(State x_next, State x, Control u, Disturbance w);
};

/**
 * @brief Probe control for step t: independent uniform draws over the box.
 *
 * The output depends only on (t, seed), so replays are exact. Every box
 * coordinate must be finite.
 */
Control probe_input(int t, int control_dim, const Box& box, std::uint64_t seed);

/// Singular-value ratio below which a regressor is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/**
 * @brief Least-squares (A, B) from x_{k+1} - w_k = A x_k + B u_k.
 *
 * The disturbance is previewed, so residuals vanish and g(N) = 0 once the
 * stacked [x_k, u_k] regressor has full column rank.
 */
EstimateReport estimate_linear(const Dataset& data,
                               const std::optional<Eigen::VectorXd>& theta_true = std::nullopt);

/// Least-squares theta from x_{k+1} - x_k - f0(x_k, u_k) - w_k = G(x_k, u_k) theta.
EstimateReport estimate_linear_in_params(const Dataset& data,
                                         const LinearInParamsSystem::DriftFn& drift,
                                         const LinearInParamsSystem::RegressorFn& regressor,
                                         int param_dim,
                                         const std::optional<Eigen::VectorXd>& theta_true = std::nullopt);

/// theta + delta with ||delta|| = c_g / sqrt(N) along a seeded random direction.
EstimateReport synthetic_estimator(const ParamVector& theta_true, int N, double c_g,
                                   std::uint64_t seed);

/// What an estimator may look at when the estimation phase ends.
struct EstimationContext {
    const Dataset& data;
    int N;
    const SystemModel& model;
};

class Estimator {
public:
    virtual ~Estimator() = default;
    virtual EstimateReport estimate(const EstimationContext& context) const = 0;
    virtual std::string name() const = 0;
};

/// Dispatches on the model kind; custom nonlinear models are rejected.
class LeastSquaresEstimator final : public Estimator {
public:
    EstimateReport estimate(const EstimationContext& context) const override;
    std::string name() const override { return "least_squares"; }
};

/// Simulation-only estimator with prescribed accuracy c_g / sqrt(N).
class SyntheticEstimator final : public Estimator {
public:
    SyntheticEstimator(double c_g, std::uint64_t seed);
    EstimateReport estimate(const EstimationContext& context) const override;
    std::string name() const override { return "synthetic"; }

private:
    double c_g_;
    std::uint64_t seed_;
};

} // namespace rhc

#endif // RHC_ESTIMATION_HPP
