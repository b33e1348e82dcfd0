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
#include "rhc/model.hpp"

#include "rhc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace rhc {

std::string to_string(SystemKind kind) {
    switch (kind) {
    case SystemKind::Linear:
        return "linear";
    case SystemKind::LinearInParams:
        return "linear-in-params";
    case SystemKind::CustomNonlinear:
        return "custom-nonlinear";
    }
    return "unknown";
}

SystemModel::SystemModel(int state_dim, int control_dim, ParamVector theta, double alpha_f)
    : n_(state_dim), m_(control_dim), theta_(std::move(theta)), alpha_f_(alpha_f) {
    if (n_ < 1 || m_ < 1) {
        throw ConfigError("state and control dimensions must be positive");
    }
    if (!theta_.values.allFinite()) {
        throw ConfigError("model parameter has non-finite entries");
    }
    if (!(alpha_f_ >= 0.0) || !std::isfinite(alpha_f_)) {
        throw ConfigError("alpha_f must be finite and nonnegative");
    }
    if (theta_.bound < theta_.norm()) {
        theta_.bound = theta_.norm();
    }
}

void SystemModel::check_dims(const State& x, const Control& u, const Disturbance& w) const {
    if (x.size() != n_ || u.size() != m_ || w.size() != n_) {
        throw ConfigError("dimension mismatch: model expects (n=" + std::to_string(n_) + ", m=" +
                          std::to_string(m_) + "), got x=" + std::to_string(x.size()) +
                          ", u=" + std::to_string(u.size()) + ", w=" + std::to_string(w.size()));
    }
}

void SystemModel::jacobians(const State& x, const Control& u, const Disturbance& w,
                            const Eigen::VectorXd& theta, Eigen::MatrixXd& fx,
                            Eigen::MatrixXd& fu) const {
    fx.resize(n_, n_);
    fu.resize(n_, m_);
    State xp = x;
    for (int i = 0; i < n_; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        xp[i] = x[i] + h;
        const State fp = transition(xp, u, w, theta);
        xp[i] = x[i] - h;
        const State fm = transition(xp, u, w, theta);
        xp[i] = x[i];
        fx.col(i) = (fp - fm) / (2.0 * h);
    }
    Control up = u;
    for (int j = 0; j < m_; ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(u[j]));
        up[j] = u[j] + h;
        const State fp = transition(x, up, w, theta);
        up[j] = u[j] - h;
        const State fm = transition(x, up, w, theta);
        up[j] = u[j];
        fu.col(j) = (fp - fm) / (2.0 * h);
    }
}

Eigen::MatrixXd SystemModel::disturbance_jacobian(const State& x, const Control& u,
                                                  const Disturbance& w,
                                                  const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd fw(n_, n_);
    Disturbance wp = w;
    for (int i = 0; i < n_; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(w[i]));
        wp[i] = w[i] + h;
        const State fp = transition(x, u, wp, theta);
        wp[i] = w[i] - h;
        const State fm = transition(x, u, wp, theta);
        wp[i] = w[i];
        fw.col(i) = (fp - fm) / (2.0 * h);
    }
    return fw;
}

std::optional<LinearForm> SystemModel::linear_form(const Eigen::VectorXd&) const {
    return std::nullopt;
}

// ---------------------------------------------------------------------------

LinearSystem::LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B)
    : SystemModel(static_cast<int>(A.rows()), static_cast<int>(B.cols()),
                  ParamVector{pack(A, B), pack(A, B).norm()}, lipschitz_constant(A, B)),
      A_(std::move(A)),
      B_(std::move(B)) {
    if (A_.rows() != A_.cols() || B_.rows() != A_.rows()) {
        throw ConfigError("linear system needs square A and B with matching rows");
    }
}

Eigen::VectorXd LinearSystem::pack(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::VectorXd theta(A.size() + B.size());
    theta.head(A.size()) = Eigen::Map<const Eigen::VectorXd>(A.data(), A.size());
    theta.tail(B.size()) = Eigen::Map<const Eigen::VectorXd>(B.data(), B.size());
    return theta;
}

LinearForm LinearSystem::unpack(const Eigen::VectorXd& theta, int n, int m) {
    if (theta.size() != n * n + n * m) {
        throw ConfigError("linear parameter vector has length " + std::to_string(theta.size()) +
                          ", expected n*n + n*m = " + std::to_string(n * n + n * m));
    }
    LinearForm form;
    form.A = Eigen::Map<const Eigen::MatrixXd>(theta.data(), n, n);
    form.B = Eigen::Map<const Eigen::MatrixXd>(theta.data() + n * n, n, m);
    return form;
}

double LinearSystem::lipschitz_constant(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const double theta_norm = pack(A, B).norm();
    if (theta_norm == 0.0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> sa(A);
    Eigen::JacobiSVD<Eigen::MatrixXd> sb(B);
    const double na = sa.singularValues().size() ? sa.singularValues()(0) : 0.0;
    const double nb = sb.singularValues().size() ? sb.singularValues()(0) : 0.0;
    return std::max(na, nb) / theta_norm;
}

State LinearSystem::transition(const State& x, const Control& u, const Disturbance& w,
                               const Eigen::VectorXd& theta) const {
    check_dims(x, u, w);
    if (theta.size() == param_dim() && theta == this->theta().values) {
        return A_ * x + B_ * u + w;
    }
    const LinearForm form = unpack(theta, state_dim(), control_dim());
    return form.A * x + form.B * u + w;
}

void LinearSystem::jacobians(const State&, const Control&, const Disturbance&,
                             const Eigen::VectorXd& theta, Eigen::MatrixXd& fx,
                             Eigen::MatrixXd& fu) const {
    const LinearForm form = unpack(theta, state_dim(), control_dim());
    fx = form.A;
    fu = form.B;
}

Eigen::MatrixXd LinearSystem::disturbance_jacobian(const State&, const Control&, const Disturbance&,
                                                   const Eigen::VectorXd&) const {
    return Eigen::MatrixXd::Identity(state_dim(), state_dim());
}

std::optional<LinearForm> LinearSystem::linear_form(const Eigen::VectorXd& theta) const {
    return unpack(theta, state_dim(), control_dim());
}

// ---------------------------------------------------------------------------

LinearInParamsSystem::LinearInParamsSystem(int state_dim, int control_dim, ParamVector theta,
                                           DriftFn drift, RegressorFn regressor, double alpha_f,
                                           std::string name)
    : SystemModel(state_dim, control_dim, std::move(theta), alpha_f),
      drift_(std::move(drift)),
      regressor_(std::move(regressor)),
      name_(std::move(name)) {
    if (!drift_ || !regressor_) {
        throw ConfigError("linear-in-params system needs drift and regressor callables");
    }
}

State LinearInParamsSystem::transition(const State& x, const Control& u, const Disturbance& w,
                                       const Eigen::VectorXd& theta) const {
    check_dims(x, u, w);
    if (theta.size() != param_dim()) {
        throw ConfigError("parameter dimension mismatch for " + name_);
    }
    const Eigen::MatrixXd G = regressor_(x, u);
    if (G.rows() != state_dim() || G.cols() != param_dim()) {
        throw ConfigError("regressor of " + name_ + " has wrong shape");
    }
    return x + drift_(x, u) + G * theta + w;
}

Eigen::MatrixXd LinearInParamsSystem::disturbance_jacobian(const State&, const Control&,
                                                           const Disturbance&,
                                                           const Eigen::VectorXd&) const {
    return Eigen::MatrixXd::Identity(state_dim(), state_dim());
}

std::shared_ptr<LinearInParamsSystem> LinearInParamsSystem::cubic_drift(double theta, double bound,
                                                                        double alpha_f) {
    Eigen::VectorXd th(1);
    th << theta;
    auto drift = [](const State&, const Control& u) -> Eigen::VectorXd { return u; };
    auto regressor = [](const State& x, const Control&) -> Eigen::MatrixXd {
        Eigen::MatrixXd G(1, 1);
        G(0, 0) = x[0] * x[0] * x[0];
        return G;
    };
    return std::make_shared<LinearInParamsSystem>(1, 1, ParamVector{th, bound}, drift, regressor,
                                                  alpha_f, "cubic_drift");
}

std::shared_ptr<LinearInParamsSystem> LinearInParamsSystem::damped_pendulum(double gravity,
                                                                            double damping,
                                                                            double dt, double bound,
                                                                            double alpha_f) {
    if (!(dt > 0.0)) {
        throw ConfigError("pendulum time step must be positive");
    }
    Eigen::VectorXd th(2);
    th << gravity, damping;
    auto drift = [dt](const State& x, const Control& u) -> Eigen::VectorXd {
        Eigen::VectorXd d(2);
        d << dt * x[1], dt * u[0];
        return d;
    };
    auto regressor = [dt](const State& x, const Control&) -> Eigen::MatrixXd {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2, 2);
        G(1, 0) = -dt * std::sin(x[0]);
        G(1, 1) = -dt * x[1];
        return G;
    };
    return std::make_shared<LinearInParamsSystem>(2, 1, ParamVector{th, bound}, drift, regressor,
                                                  alpha_f, "damped_pendulum");
}

// ---------------------------------------------------------------------------

CustomSystem::CustomSystem(int state_dim, int control_dim, ParamVector theta, TransitionFn fn,
                           double alpha_f)
    : SystemModel(state_dim, control_dim, std::move(theta), alpha_f), fn_(std::move(fn)) {
    if (!fn_) {
        throw ConfigError("custom system needs a transition callable");
    }
}

State CustomSystem::transition(const State& x, const Control& u, const Disturbance& w,
                               const Eigen::VectorXd& theta) const {
    check_dims(x, u, w);
    State next = fn_(x, u, w, theta);
    if (next.size() != state_dim()) {
        throw ConfigError("custom transition returned a state of the wrong dimension");
    }
    return next;
}

// ---------------------------------------------------------------------------

State step(const SystemModel& model, const State& x, const Control& u, const Disturbance& w) {
    return model.transition(x, u, w, model.theta().values);
}

StateSequence rollout(const SystemModel& model, const State& x0, const ControlSequence& controls,
                      const DisturbanceSequence& disturbances) {
    return rollout(model, x0, controls, disturbances, model.theta().values);
}

StateSequence rollout(const SystemModel& model, const State& x0, const ControlSequence& controls,
                      const DisturbanceSequence& disturbances, const Eigen::VectorXd& theta) {
    if (controls.size() != disturbances.size()) {
        throw ConfigError("rollout needs equally many controls (" + std::to_string(controls.size()) +
                          ") and disturbances (" + std::to_string(disturbances.size()) + ")");
    }
    require_dim(x0, model.state_dim(), "initial state");
    StateSequence states;
    states.reserve(controls.size() + 1);
    states.push_back(x0);
    for (std::size_t k = 0; k < controls.size(); ++k) {
        states.push_back(model.transition(states.back(), controls[k], disturbances[k], theta));
    }
    return states;
}

} // namespace rhc
