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
#ifndef RHC_COST_HPP
#define RHC_COST_HPP

#include "rhc/types.hpp"

#include <functional>
#include <optional>

namespace rhc {

/// Time-specific quadratic weights of c_t(x, u) = x'Q x + u'R u.
struct QuadraticStage {
    Eigen::MatrixXd Q;
    Eigen::MatrixXd R;
};

/**
 * @brief Time-indexed stage costs c_t(x, u) for t = 1..horizon_end.
 *
 * Costs are generated on demand from t, so long runs never materialize a
 * list of cost functions. Implementations must satisfy
 * c_t(x, u) >= alpha_lo() * sigma(x) >= 0.
 */
class CostModel {
public:
    CostModel(int state_dim, int control_dim, int horizon_end);
    virtual ~CostModel() = default;

    int state_dim() const { return n_; }
    int control_dim() const { return m_; }
    int horizon_end() const { return t_end_; }

    /// c_t(x, u). Throws ConfigError when t is outside [1, horizon_end].
    double stage(int t, const State& x, const Control& u) const;

    /// Same as stage() with t clamped into [1, horizon_end].
    double stage_clamped(int t, const State& x, const Control& u) const;
    int clamp_time(int t) const;

    virtual double sigma(const State& x) const = 0;

    /// Gradients of c_t; central differences unless overridden.
    virtual void stage_gradient(int t, const State& x, const Control& u, Eigen::VectorXd& gx,
                                Eigen::VectorXd& gu) const;

    /// Quadratic weights at time t when the cost has that form.
    virtual std::optional<QuadraticStage> quadratic(int t) const;

    double alpha_lo() const { return alpha_lo_; }
    double alpha_c() const { return alpha_c_; }
    const std::optional<double>& alpha_hi() const { return alpha_hi_; }
    const std::optional<double>& gamma_bar() const { return gamma_bar_; }

    void set_alpha_lo(double value);
    void set_alpha_hi(std::optional<double> value);
    void set_gamma_bar(std::optional<double> value);
    void set_alpha_c(double value);

protected:
    virtual double evaluate(int t, const State& x, const Control& u) const = 0;

private:
    int n_;
    int m_;
    int t_end_;
    double alpha_lo_ = 0.0;
    double alpha_c_ = 0.0;
    std::optional<double> alpha_hi_;
    std::optional<double> gamma_bar_;
};

enum class SigmaKind { SquaredNorm, QuadraticForm };

/**
 * @brief c_t(x, u) = x'Q_t x + u'R u with Q_t = Q (1 + amp sin(2 pi t / period)).
 *
 * With sigma = ||x||^2 the lower constant is lambda_min(Q)(1 - amp); with
 * sigma = x'Q x it is (1 - amp). amp = 0 gives a time-invariant cost.
 */
class QuadraticCost final : public CostModel {
public:
    struct Options {
        double modulation_amplitude = 0.0;
        double modulation_period = 1.0;
        SigmaKind sigma = SigmaKind::SquaredNorm;
        /// Radius of the region over which alpha_c is reported.
        double operating_radius = 10.0;
    };

    QuadraticCost(Eigen::MatrixXd Q, Eigen::MatrixXd R, int horizon_end);
    QuadraticCost(Eigen::MatrixXd Q, Eigen::MatrixXd R, int horizon_end, Options options);

    double sigma(const State& x) const override;
    void stage_gradient(int t, const State& x, const Control& u, Eigen::VectorXd& gx,
                        Eigen::VectorXd& gu) const override;
    std::optional<QuadraticStage> quadratic(int t) const override;

    const Eigen::MatrixXd& Q() const { return Q_; }
    const Eigen::MatrixXd& R() const { return R_; }
    const Options& options() const { return options_; }
    double state_weight_scale(int t) const;

protected:
    double evaluate(int t, const State& x, const Control& u) const override;

private:
    Eigen::MatrixXd Q_;
    Eigen::MatrixXd R_;
    Options options_;
};

/// Cost given by callables; alpha_lo must be supplied by the caller.
class FunctionCost final : public CostModel {
public:
    using StageFn = std::function<double(int, const State&, const Control&)>;
    using SigmaFn = std::function<double(const State&)>;

    FunctionCost(int state_dim, int control_dim, int horizon_end, StageFn stage, SigmaFn sigma,
                 double alpha_lo, double alpha_c);

    double sigma(const State& x) const override;

protected:
    double evaluate(int t, const State& x, const Control& u) const override;

private:
    StageFn stage_;
    SigmaFn sigma_;
};

/// Evaluates c_t(x, u) with range and dimension checks.
double evaluate_cost(const CostModel& costs, int t, const State& x, const Control& u);

} // namespace rhc

#endif // RHC_COST_HPP
