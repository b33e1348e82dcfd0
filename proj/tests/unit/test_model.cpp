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
#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace rhc;
using namespace rhc::testing;

TEST(Step, LinearMapEvaluation) {
    LinearSystem sys(scalar(0.9), scalar(1.0));
    EXPECT_DOUBLE_EQ(step(sys, vec({1.0}), vec({0.0}), vec({0.0}))[0], 0.9);
}

TEST(Step, ExactCancellation) {
    LinearSystem sys(scalar(0.9), scalar(1.0));
    EXPECT_DOUBLE_EQ(step(sys, vec({1.0}), vec({-0.9}), vec({0.0}))[0], 0.0);
}

TEST(Step, AdditiveDisturbance) {
    LinearSystem sys(scalar(0.9), scalar(1.0));
    EXPECT_DOUBLE_EQ(step(sys, vec({1.0}), vec({0.0}), vec({0.5}))[0], 1.4);
}

TEST(Step, DimensionMismatchIsConfigError) {
    LinearSystem sys(scalar(0.9), scalar(1.0));
    EXPECT_THROW(step(sys, vec({1.0, 2.0}), vec({0.0}), vec({0.0})), ConfigError);
    EXPECT_THROW(step(sys, vec({1.0}), vec({0.0, 1.0}), vec({0.0})), ConfigError);
}

TEST(Rollout, EmptyControlsReturnInitialState) {
    LinearSystem sys(scalar(1.0), scalar(1.0));
    const auto xs = rollout(sys, vec({3.0}), {}, {});
    ASSERT_EQ(xs.size(), 1u);
    EXPECT_EQ(xs[0][0], 3.0);
}

TEST(Rollout, DriveToOrigin) {
    LinearSystem sys(scalar(1.0), scalar(1.0));
    const auto xs = rollout(sys, vec({1.0}), scalar_seq({-1.0, 0.0}), scalar_seq({0.0, 0.0}));
    ASSERT_EQ(xs.size(), 3u);
    EXPECT_EQ(xs[1][0], 0.0);
    EXPECT_EQ(xs[2][0], 0.0);
}

TEST(Rollout, DisturbanceIntegration) {
    LinearSystem sys(scalar(1.0), scalar(1.0));
    const auto xs = rollout(sys, vec({0.0}), scalar_seq({0.0, 0.0}), scalar_seq({1.0, -1.0}));
    EXPECT_EQ(xs[1][0], 1.0);
    EXPECT_EQ(xs[2][0], 0.0);
}

TEST(Rollout, LengthMismatchIsConfigError) {
    LinearSystem sys(scalar(1.0), scalar(1.0));
    EXPECT_THROW(rollout(sys, vec({0.0}), scalar_seq({0.0}), scalar_seq({1.0, -1.0})), ConfigError);
}

TEST(Rollout, MatchesRepeatedStepExactly) {
    PlanarScenario sc;
    Gen gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = gen.integer(0, 12);
        ControlSequence us;
        DisturbanceSequence ws;
        for (int i = 0; i < k; ++i) {
            us.push_back(gen.vector(1, 3.0));
            ws.push_back(gen.vector(2, 1.0));
        }
        const State x0 = gen.vector(2, 5.0);
        const auto xs = rollout(*sc.model, x0, us, ws);
        State x = x0;
        for (int i = 0; i < k; ++i) {
            x = step(*sc.model, x, us[static_cast<std::size_t>(i)], ws[static_cast<std::size_t>(i)]);
            EXPECT_EQ(xs[static_cast<std::size_t>(i + 1)], x);
        }
    }
}

TEST(LinearSystem, ParameterPackingRoundTrips) {
    Eigen::MatrixXd A(2, 2);
    A << 1, 2, 3, 4;
    Eigen::MatrixXd B(2, 1);
    B << 5, 6;
    const auto theta = LinearSystem::pack(A, B);
    const auto form = LinearSystem::unpack(theta, 2, 1);
    EXPECT_EQ(form.A, A);
    EXPECT_EQ(form.B, B);
    EXPECT_THROW(LinearSystem::unpack(theta.head(5), 2, 1), ConfigError);
}

TEST(LinearSystem, StepIsAffine) {
    PlanarScenario sc;
    Gen gen(3);
    const State z = State::Zero(2);
    const Control zu = Control::Zero(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const State x1 = gen.vector(2, 10.0), x2 = gen.vector(2, 10.0);
        const Control u1 = gen.vector(1, 10.0), u2 = gen.vector(1, 10.0);
        const Disturbance w1 = gen.vector(2, 2.0), w2 = gen.vector(2, 2.0);
        const State lhs = step(*sc.model, x1 + x2, u1 + u2, w1 + w2);
        const State rhs = step(*sc.model, x1, u1, w1) + step(*sc.model, x2, u2, w2) -
                          step(*sc.model, z, zu, z);
        EXPECT_LE((lhs - rhs).norm(), 1e-12 * std::max(1.0, lhs.norm()));
    }
}

namespace {

void expect_lipschitz(const SystemModel& model, double radius, std::uint64_t seed) {
    Gen gen(seed);
    const double scale = model.alpha_f() * model.theta().norm();
    for (int trial = 0; trial < 1000; ++trial) {
        const State x = gen.vector(model.state_dim(), radius);
        const State xp = gen.vector(model.state_dim(), radius);
        const Control u = gen.vector(model.control_dim(), radius);
        const Control up = gen.vector(model.control_dim(), radius);
        const Disturbance w = gen.vector(model.state_dim(), 1.0);
        const double lhs = (step(model, xp, up, w) - step(model, x, u, w)).norm();
        const double rhs = scale * ((xp - x).norm() + (up - u).norm());
        EXPECT_LE(lhs, rhs * (1.0 + 1e-12) + 1e-14);
    }
}

} // namespace

TEST(LinearSystem, LipschitzMetadataHonored) {
    PlanarScenario sc;
    expect_lipschitz(*sc.model, 5.0, 7);
    LinearSystem unstable(scalar(1.3), scalar(0.4));
    expect_lipschitz(unstable, 5.0, 8);
}

TEST(LinearInParams, CubicDriftTransition) {
    auto sys = LinearInParamsSystem::cubic_drift(0.5, 1.0, 1.0);
    const State x = step(*sys, vec({2.0}), vec({-1.0}), vec({0.25}));
    EXPECT_DOUBLE_EQ(x[0], 2.0 - 1.0 + 0.5 * 8.0 + 0.25);
}

TEST(LinearInParams, PendulumLipschitzOnBoundedRegion) {
    // With theta = (g, d), |df| <= (1 + dt max(1, g, d)) (|dx| + |du|) on any region.
    const double dt = 0.05;
    const double g = 9.81, d = 0.5;
    const double theta_norm = std::hypot(g, d);
    const double alpha_f = (1.0 + dt * std::max({1.0, g, d})) / theta_norm;
    auto sys = LinearInParamsSystem::damped_pendulum(g, d, dt, 20.0, alpha_f);
    expect_lipschitz(*sys, 3.0, 9);
}

TEST(LinearInParams, FiniteDifferenceJacobiansMatchLinearisation) {
    auto sys = LinearInParamsSystem::damped_pendulum(9.81, 0.5, 0.05, 20.0, 1.0);
    Eigen::MatrixXd fx, fu;
    sys->jacobians(vec({0.3, -0.2}), vec({0.1}), vec({0.0, 0.0}), sys->theta().values, fx, fu);
    Eigen::MatrixXd expected(2, 2);
    expected << 1.0, 0.05, -0.05 * 9.81 * std::cos(0.3), 1.0 - 0.05 * 0.5;
    EXPECT_LE((fx - expected).norm(), 1e-8);
    EXPECT_NEAR(fu(1, 0), 0.05, 1e-8);
}

TEST(EvaluateCost, DirectEvaluation) {
    QuadraticCost c(scalar(1.0), scalar(1.0), 10);
    EXPECT_DOUBLE_EQ(evaluate_cost(c, 1, vec({1.0}), vec({-0.5})), 1.25);
}

TEST(EvaluateCost, OriginIsZeroCost) {
    QuadraticCost c(scalar(1.0), scalar(1.0), 10);
    EXPECT_EQ(evaluate_cost(c, 3, vec({0.0}), vec({0.0})), 0.0);
}

TEST(EvaluateCost, WeightedEvaluation) {
    QuadraticCost c(scalar(2.0), scalar(1.0), 10);
    EXPECT_DOUBLE_EQ(evaluate_cost(c, 1, vec({1.0}), vec({1.0})), 3.0);
}

TEST(EvaluateCost, TimeOutOfRange) {
    QuadraticCost c(scalar(1.0), scalar(1.0), 10);
    EXPECT_THROW(evaluate_cost(c, 0, vec({1.0}), vec({0.0})), ConfigError);
    EXPECT_THROW(evaluate_cost(c, 11, vec({1.0}), vec({0.0})), ConfigError);
    EXPECT_NO_THROW(evaluate_cost(c, 10, vec({1.0}), vec({0.0})));
}

TEST(CostModel, LowerBoundHoldsOnRandomSamples) {
    std::vector<std::shared_ptr<CostModel>> models;
    models.push_back(std::make_shared<QuadraticCost>(scalar(1.0), scalar(1.0), 200));
    PlanarScenario planar(200, 0.3);
    models.push_back(planar.costs);
    Eigen::MatrixXd Q(2, 2);
    Q << 2.0, 0.5, 0.5, 1.0;
    QuadraticCost::Options qf;
    qf.sigma = SigmaKind::QuadraticForm;
    qf.modulation_amplitude = 0.5;
    qf.modulation_period = 7.0;
    models.push_back(std::make_shared<QuadraticCost>(Q, 0.2 * Eigen::MatrixXd::Identity(2, 2), 200, qf));
    Gen gen(21);
    for (const auto& c : models) {
        for (int trial = 0; trial < 1000; ++trial) {
            const State x = gen.vector(c->state_dim(), 10.0);
            const Control u = gen.vector(c->control_dim(), 10.0);
            const int t = gen.integer(1, c->horizon_end());
            const double s = c->sigma(x);
            EXPECT_GE(s, 0.0);
            EXPECT_GE(c->stage(t, x, u), c->alpha_lo() * s * (1.0 - 1e-12));
        }
    }
}

TEST(CostModel, AnalyticGradientMatchesFiniteDifferences) {
    PlanarScenario planar(200, 0.3);
    Gen gen(5);
    const State x = gen.vector(2, 2.0);
    const Control u = gen.vector(1, 2.0);
    Eigen::VectorXd gx, gu;
    planar.costs->stage_gradient(17, x, u, gx, gu);
    FunctionCost fd(2, 1, 200, [&](int t, const State& xx, const Control& uu) {
        return planar.costs->stage(t, xx, uu);
    }, [](const State& xx) { return xx.squaredNorm(); }, 0.7, 1.0);
    Eigen::VectorXd fx, fu;
    fd.stage_gradient(17, x, u, fx, fu);
    EXPECT_LE((gx - fx).norm(), 1e-6);
    EXPECT_LE((gu - fu).norm(), 1e-6);
}

TEST(Trajectory, RunningSumsMatchRecords) {
    Trajectory traj(ControllerKind::KnownPreview, 3);
    Gen gen(2);
    double cost = 0.0, energy = 0.0;
    for (int t = 1; t <= 20; ++t) {
        StepRecord r{t, gen.vector(2, 1.0), gen.vector(1, 1.0), gen.vector(2, 1.0), gen.uniform(0, 3), 0.0};
        cost += r.stage_cost;
        energy += r.w.squaredNorm();
        traj.append(r);
    }
    EXPECT_DOUBLE_EQ(traj.total_cost(), cost);
    EXPECT_DOUBLE_EQ(traj.energy(), energy);
    EXPECT_THROW(traj.append(StepRecord{30, State::Zero(2), Control::Zero(1), State::Zero(2), 0, 0}),
                 ConfigError);
    const auto window = traj.disturbance_window(19, 4);
    EXPECT_EQ(window[0], traj.at_time(19).w);
    EXPECT_EQ(window[2].norm(), 0.0);
}
