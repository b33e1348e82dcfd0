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
#ifndef RHC_MODEL_HPP
#define RHC_MODEL_HPP

#include "rhc/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace rhc {

enum class SystemKind { Linear, LinearInParams, CustomNonlinear };

std::string to_string(SystemKind kind);

/// A and B of an affine map x' = A x + B u + w.
struct LinearForm {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

/**
 * @brief Parameterized discrete-time transition x' = f(x, u, w; theta).
 *
 * The model carries its true parameter, but every evaluation entry point
 * also accepts an explicit parameter so that controllers can plan with an
 * estimate while the plant evolves under the true value.
 */
class SystemModel {
public:
    SystemModel(int state_dim, int control_dim, ParamVector theta, double alpha_f);
    virtual ~SystemModel() = default;

    int state_dim() const { return n_; }
    int control_dim() const { return m_; }
    int param_dim() const { return static_cast<int>(theta_.values.size()); }
    const ParamVector& theta() const { return theta_; }

    /// Lipschitz constant of f in (x, u), scaled by ||theta||.
    double alpha_f() const { return alpha_f_; }

    virtual SystemKind kind() const = 0;

    virtual State transition(const State& x, const Control& u, const Disturbance& w,
                             const Eigen::VectorXd& theta) const = 0;

    /// Jacobians df/dx and df/du. Central differences unless overridden.
    virtual void jacobians(const State& x, const Control& u, const Disturbance& w,
                           const Eigen::VectorXd& theta, Eigen::MatrixXd& fx,
                           Eigen::MatrixXd& fu) const;

    /// df/dw. Central differences unless overridden.
    virtual Eigen::MatrixXd disturbance_jacobian(const State& x, const Control& u,
                                                 const Disturbance& w,
                                                 const Eigen::VectorXd& theta) const;

    /// Affine form for the given parameter, if the dynamics are linear in (x, u).
    virtual std::optional<LinearForm> linear_form(const Eigen::VectorXd& theta) const;

    void check_dims(const State& x, const Control& u, const Disturbance& w) const;

private:
    int n_;
    int m_;
    ParamVector theta_;
    double alpha_f_;
};

/**
 * @brief x' = A x + B u + w.
 *
 * theta stacks vec(A) and vec(B), both column-major, so p = n*n + n*m.
 */
class LinearSystem final : public SystemModel {
public:
    LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B);

    SystemKind kind() const override { return SystemKind::Linear; }
    State transition(const State& x, const Control& u, const Disturbance& w,
                     const Eigen::VectorXd& theta) const override;
    void jacobians(const State& x, const Control& u, const Disturbance& w,
                   const Eigen::VectorXd& theta, Eigen::MatrixXd& fx,
                   Eigen::MatrixXd& fu) const override;
    Eigen::MatrixXd disturbance_jacobian(const State& x, const Control& u, const Disturbance& w,
                                         const Eigen::VectorXd& theta) const override;
    std::optional<LinearForm> linear_form(const Eigen::VectorXd& theta) const override;

    const Eigen::MatrixXd& A() const { return A_; }
    const Eigen::MatrixXd& B() const { return B_; }

    static Eigen::VectorXd pack(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
    static LinearForm unpack(const Eigen::VectorXd& theta, int n, int m);

    /// max(||A||_2, ||B||_2) / ||theta||_2, the tightest constant of the scaled form.
    static double lipschitz_constant(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

private:
    Eigen::MatrixXd A_;
    Eigen::MatrixXd B_;
};

/// x' = x + f0(x, u) + G(x, u) theta + w.
class LinearInParamsSystem final : public SystemModel {
public:
    using DriftFn = std::function<Eigen::VectorXd(const State&, const Control&)>;
    using RegressorFn = std::function<Eigen::MatrixXd(const State&, const Control&)>;

    LinearInParamsSystem(int state_dim, int control_dim, ParamVector theta, DriftFn drift,
                         RegressorFn regressor, double alpha_f, std::string name = "linear-in-params");

    SystemKind kind() const override { return SystemKind::LinearInParams; }
    State transition(const State& x, const Control& u, const Disturbance& w,
                     const Eigen::VectorXd& theta) const override;
    Eigen::MatrixXd disturbance_jacobian(const State& x, const Control& u, const Disturbance& w,
                                         const Eigen::VectorXd& theta) const override;

    const DriftFn& drift() const { return drift_; }
    const RegressorFn& regressor() const { return regressor_; }
    const std::string& name() const { return name_; }

    /// Scalar x' = x + u + theta * x^3 + w.
    static std::shared_ptr<LinearInParamsSystem> cubic_drift(double theta, double bound, double alpha_f);

    /// Euler-discretized pendulum with unknown gravity and damping coefficients.
    static std::shared_ptr<LinearInParamsSystem> damped_pendulum(double gravity, double damping,
                                                                 double dt, double bound,
                                                                 double alpha_f);

private:
    DriftFn drift_;
    RegressorFn regressor_;
    std::string name_;
};

/// Arbitrary transition supplied as a callable.
class CustomSystem final : public SystemModel {
public:
    using TransitionFn = std::function<State(const State&, const Control&, const Disturbance&,
                                             const Eigen::VectorXd&)>;

    CustomSystem(int state_dim, int control_dim, ParamVector theta, TransitionFn fn, double alpha_f);

    SystemKind kind() const override { return SystemKind::CustomNonlinear; }
    State transition(const State& x, const Control& u, const Disturbance& w,
                     const Eigen::VectorXd& theta) const override;

private:
    TransitionFn fn_;
};

/// f(x, u, w; theta) under the model's true parameter.
State step(const SystemModel& model, const State& x, const Control& u, const Disturbance& w);

/**
 * @brief States visited from x0 under the given controls and disturbances.
 *
 * Returns k+1 states with states[0] == x0. Throws ConfigError when the
 * sequences differ in length.
 */
StateSequence rollout(const SystemModel& model, const State& x0, const ControlSequence& controls,
                      const DisturbanceSequence& disturbances);
StateSequence rollout(const SystemModel& model, const State& x0, const ControlSequence& controls,
                      const DisturbanceSequence& disturbances, const Eigen::VectorXd& theta);

} // namespace rhc

#endif // RHC_MODEL_HPP
