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
#include "rhc/cost.hpp"

#include "rhc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace rhc {

namespace {

double symmetric_eigen_min(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double symmetric_eigen_max(const Eigen::MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

} // namespace

CostModel::CostModel(int state_dim, int control_dim, int horizon_end)
    : n_(state_dim), m_(control_dim), t_end_(horizon_end) {
    if (n_ < 1 || m_ < 1) {
        throw ConfigError("cost dimensions must be positive");
    }
    if (t_end_ < 1) {
        throw ConfigError("cost horizon end must be at least 1");
    }
}

double CostModel::stage(int t, const State& x, const Control& u) const {
    if (t < 1 || t > t_end_) {
        throw ConfigError("cost time index t=" + std::to_string(t) + " outside [1, " +
                          std::to_string(t_end_) + "]");
    }
    return evaluate(t, x, u);
}

int CostModel::clamp_time(int t) const { return std::clamp(t, 1, t_end_); }

double CostModel::stage_clamped(int t, const State& x, const Control& u) const {
    return evaluate(clamp_time(t), x, u);
}

void CostModel::stage_gradient(int t, const State& x, const Control& u, Eigen::VectorXd& gx,
                               Eigen::VectorXd& gu) const {
    gx.resize(n_);
    gu.resize(m_);
    State xp = x;
    for (int i = 0; i < n_; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const double fp = stage_clamped(t, xp, u);
        xp[i] = x[i] - h;
        const double fm = stage_clamped(t, xp, u);
        xp[i] = x[i];
        gx[i] = (fp - fm) / (2.0 * h);
    }
    Control up = u;
    for (int j = 0; j < m_; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
        up[j] = u[j] + h;
        const double fp = stage_clamped(t, x, up);
        up[j] = u[j] - h;
        const double fm = stage_clamped(t, x, up);
        up[j] = u[j];
        gu[j] = (fp - fm) / (2.0 * h);
    }
}

std::optional<QuadraticStage> CostModel::quadratic(int) const { return std::nullopt; }

void CostModel::set_alpha_lo(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError("alpha_lo must be positive and finite");
    }
    alpha_lo_ = value;
}

void CostModel::set_alpha_hi(std::optional<double> value) {
    if (value && (!(*value > 0.0) || !std::isfinite(*value))) {
        throw ConfigError("alpha_hi must be positive and finite");
    }
    alpha_hi_ = value;
}

void CostModel::set_gamma_bar(std::optional<double> value) {
    if (value && (!(*value >= 0.0) || !std::isfinite(*value))) {
        throw ConfigError("gamma_bar must be nonnegative and finite");
    }
    gamma_bar_ = value;
}

void CostModel::set_alpha_c(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw ConfigError("alpha_c must be nonnegative and finite");
    }
    alpha_c_ = value;
}

// ---------------------------------------------------------------------------

QuadraticCost::QuadraticCost(Eigen::MatrixXd Q, Eigen::MatrixXd R, int horizon_end)
    : QuadraticCost(std::move(Q), std::move(R), horizon_end, Options{}) {}

QuadraticCost::QuadraticCost(Eigen::MatrixXd Q, Eigen::MatrixXd R, int horizon_end,
                             Options options)
    : CostModel(static_cast<int>(Q.rows()), static_cast<int>(R.rows()), horizon_end),
      Q_(std::move(Q)),
      R_(std::move(R)),
      options_(options) {
    if (Q_.rows() != Q_.cols() || R_.rows() != R_.cols()) {
        throw ConfigError("cost weights Q and R must be square");
    }
    if (!Q_.isApprox(Q_.transpose(), 1e-12) || !R_.isApprox(R_.transpose(), 1e-12)) {
        throw ConfigError("cost weights Q and R must be symmetric");
    }
    const double amp = options_.modulation_amplitude;
    if (!(amp >= 0.0 && amp < 1.0)) {
        throw ConfigError("cost modulation amplitude must lie in [0, 1)");
    }
    if (amp > 0.0 && !(options_.modulation_period > 0.0)) {
        throw ConfigError("cost modulation period must be positive");
    }
    const double q_min = symmetric_eigen_min(Q_);
    if (!(q_min > 0.0)) {
        throw ConfigError("state weight Q must be positive definite");
    }
    if (symmetric_eigen_min(R_) < 0.0) {
        throw ConfigError("control weight R must be positive semidefinite");
    }
    const double lower = options_.sigma == SigmaKind::SquaredNorm ? q_min * (1.0 - amp) : 1.0 - amp;
    set_alpha_lo(lower);
    set_alpha_c(2.0 * (1.0 + amp) * std::max(symmetric_eigen_max(Q_), symmetric_eigen_max(R_)) *
                options_.operating_radius);
}

double QuadraticCost::state_weight_scale(int t) const {
    const double amp = options_.modulation_amplitude;
    if (amp == 0.0) {
        return 1.0;
    }
    return 1.0 + amp * std::sin(2.0 * std::numbers::pi * t / options_.modulation_period);
}

double QuadraticCost::sigma(const State& x) const {
    if (options_.sigma == SigmaKind::SquaredNorm) {
        return x.squaredNorm();
    }
    return x.dot(Q_ * x);
}

double QuadraticCost::evaluate(int t, const State& x, const Control& u) const {
    return state_weight_scale(t) * x.dot(Q_ * x) + u.dot(R_ * u);
}

void QuadraticCost::stage_gradient(int t, const State& x, const Control& u, Eigen::VectorXd& gx,
                                   Eigen::VectorXd& gu) const {
    gx = 2.0 * state_weight_scale(clamp_time(t)) * (Q_ * x);
    gu = 2.0 * (R_ * u);
}

std::optional<QuadraticStage> QuadraticCost::quadratic(int t) const {
    return QuadraticStage{state_weight_scale(clamp_time(t)) * Q_, R_};
}

// ---------------------------------------------------------------------------

FunctionCost::FunctionCost(int state_dim, int control_dim, int horizon_end, StageFn stage,
                           SigmaFn sigma, double alpha_lo, double alpha_c)
    : CostModel(state_dim, control_dim, horizon_end),
      stage_(std::move(stage)),
      sigma_(std::move(sigma)) {
    if (!stage_ || !sigma_) {
        throw ConfigError("function cost needs stage and sigma callables");
    }
    set_alpha_lo(alpha_lo);
    set_alpha_c(alpha_c);
}

double FunctionCost::sigma(const State& x) const { return sigma_(x); }

double FunctionCost::evaluate(int t, const State& x, const Control& u) const {
    return stage_(t, x, u);
}

// ---------------------------------------------------------------------------

double evaluate_cost(const CostModel& costs, int t, const State& x, const Control& u) {
    require_dim(x, costs.state_dim(), "cost state");
    require_dim(u, costs.control_dim(), "cost control");
    return costs.stage(t, x, u);
}

} // namespace rhc
