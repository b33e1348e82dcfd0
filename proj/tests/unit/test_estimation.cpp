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

#include <cmath>

using namespace rhc;
using namespace rhc::testing;

namespace {

// Probes a plant from x1 for `count` steps with previewed disturbances.
Dataset collect(const SystemModel& model, const Box& box, const State& x1, int count,
                std::uint64_t seed, double w_c) {
    Dataset data;
    Gen gen(seed + 1);
    State x = x1;
    for (int t = 1; t <= count; ++t) {
        const Control u = probe_input(t, model.control_dim(), box, seed);
        const Disturbance w = gen.in_ball(model.state_dim(), w_c);
        const State next = step(model, x, u, w);
        data.add(next, x, u, w);
        x = next;
    }
    return data;
}

} // namespace

TEST(ProbeInput, DeterministicAndInsideBox) {
    const Box box{vec({-1.0, 0.0}), vec({2.0, 0.5})};
    for (int t = 1; t <= 200; ++t) {
        const Control a = probe_input(t, 2, box, 42);
        EXPECT_EQ(a, probe_input(t, 2, box, 42));
        EXPECT_TRUE(box.contains(a));
    }
    EXPECT_NE(probe_input(1, 2, box, 42), probe_input(2, 2, box, 42));
    EXPECT_NE(probe_input(1, 2, box, 42), probe_input(1, 2, box, 43));
}

TEST(ProbeInput, RejectsUnboundedBox) {
    EXPECT_THROW(probe_input(1, 1, Box::unbounded(1), 0), ConfigError);
    EXPECT_THROW(probe_input(1, 2, Box::symmetric(1, 1.0), 0), ConfigError);
}

TEST(EstimateLinear, RecoversScalarSystemFromTwoSamples) {
    Dataset data;
    // x' = 0.9 x + 2 u + w.
    data.add(vec({0.9 * 1.0 + 2.0 * 0.5 + 0.1}), vec({1.0}), vec({0.5}), vec({0.1}));
    data.add(vec({0.9 * -2.0 + 2.0 * 1.0 - 0.3}), vec({-2.0}), vec({1.0}), vec({-0.3}));
    const auto rep = estimate_linear(data, LinearSystem::pack(scalar(0.9), scalar(2.0)));
    EXPECT_NEAR(rep.theta_hat.values[0], 0.9, 1e-12);
    EXPECT_NEAR(rep.theta_hat.values[1], 2.0, 1e-12);
    EXPECT_EQ(rep.g_of_N, 0.0);
    EXPECT_EQ(rep.samples, 2);
    ASSERT_TRUE(rep.actual_error.has_value());
    EXPECT_LT(*rep.actual_error, 1e-12);
}

TEST(EstimateLinear, RankDeficientRegressorThrows) {
    Dataset one;
    one.add(vec({1.0}), vec({1.0}), vec({0.0}), vec({0.0}));
    EXPECT_THROW(estimate_linear(one), RankDeficiencyError);

    Dataset collinear;
    collinear.add(vec({2.0}), vec({1.0}), vec({1.0}), vec({0.0}));
    collinear.add(vec({4.0}), vec({2.0}), vec({2.0}), vec({0.0}));
    EXPECT_THROW(estimate_linear(collinear), RankDeficiencyError);

    EXPECT_THROW(estimate_linear(Dataset{}), RankDeficiencyError);
}

TEST(EstimateLinear, RecoversRandomSystemsExactly) {
    Gen gen(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = gen.integer(1, 4);
        const int m = gen.integer(1, 3);
        Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return gen.uniform(-0.6, 0.6); });
        Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(n, m, [&] { return gen.uniform(-1.0, 1.0); });
        LinearSystem sys(A, B);
        const auto data = collect(sys, Box::symmetric(m, 1.0), gen.vector(n, 1.0), 3 * (n + m),
                                  static_cast<std::uint64_t>(trial), 0.2);
        const auto rep = estimate_linear(data, sys.theta().values);
        EXPECT_LT(*rep.actual_error, 1e-9 * std::max(1.0, sys.theta().norm())) << "trial " << trial;
        EXPECT_EQ(rep.g_of_N, 0.0);
    }
}

TEST(EstimateLinearInParams, RecoversCubicDrift) {
    auto sys = LinearInParamsSystem::cubic_drift(-0.2, 1.0, 1.0);
    const auto data = collect(*sys, Box::symmetric(1, 0.5), vec({0.4}), 5, 9, 0.1);
    const auto rep = estimate_linear_in_params(data, sys->drift(), sys->regressor(), 1, sys->theta().values);
    EXPECT_NEAR(rep.theta_hat.values[0], -0.2, 1e-12);
}

TEST(EstimateLinearInParams, RecoversPendulumCoefficients) {
    auto sys = LinearInParamsSystem::damped_pendulum(9.81, 0.3, 0.05, 20.0, 1.5);
    const auto data = collect(*sys, Box::symmetric(1, 2.0), vec({0.3, 0.0}), 12, 2, 0.05);
    const auto rep = estimate_linear_in_params(data, sys->drift(), sys->regressor(), 2, sys->theta().values);
    EXPECT_LT(*rep.actual_error, 1e-9);
}

TEST(EstimateLinearInParams, ZeroRegressorIsRankDeficient) {
    auto sys = LinearInParamsSystem::cubic_drift(0.5, 1.0, 1.0);
    Dataset data;
    // x = 0 makes x^3 vanish, so theta is unidentifiable.
    data.add(vec({0.3}), vec({0.0}), vec({0.3}), vec({0.0}));
    data.add(vec({-0.1}), vec({0.0}), vec({-0.1}), vec({0.0}));
    EXPECT_THROW(estimate_linear_in_params(data, sys->drift(), sys->regressor(), 1), RankDeficiencyError);
}

TEST(SyntheticEstimator, ErrorIsExactlyCgOverRootN) {
    const ParamVector truth{vec({1.0, 1.0}), 5.0};
    for (int N : {1, 4, 25, 100}) {
        const auto rep = synthetic_estimator(truth, N, 0.6, 11);
        EXPECT_NEAR(*rep.actual_error, 0.6 / std::sqrt(N), 1e-14);
        EXPECT_NEAR(rep.g_of_N, 0.6 / std::sqrt(N), 1e-15);
        EXPECT_EQ(rep.theta_hat.values, synthetic_estimator(truth, N, 0.6, 11).theta_hat.values);
    }
    EXPECT_EQ(synthetic_estimator(truth, 10, 0.0, 11).theta_hat.values, truth.values);
    EXPECT_THROW(synthetic_estimator(truth, 0, 0.6, 11), ConfigError);
    EXPECT_THROW(synthetic_estimator(truth, 3, -1.0, 11), ConfigError);
}

TEST(SyntheticEstimator, ErrorDecaysMonotonicallyInN) {
    const ParamVector truth{vec({0.5, -0.2, 1.0}), 5.0};
    double prev = std::numeric_limits<double>::infinity();
    for (int N = 1; N <= 64; N *= 2) {
        const double err = *synthetic_estimator(truth, N, 1.0, 3).actual_error;
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(LeastSquaresEstimator, DispatchesOnModelKind) {
    ScalarScenario sc(0.8, 1.2);
    const auto data = collect(*sc.model, Box::symmetric(1, 1.0), vec({1.0}), 4, 1, 0.1);
    const auto rep = LeastSquaresEstimator{}.estimate({data, 4, *sc.model});
    EXPECT_LT(*rep.actual_error, 1e-10);

    CustomSystem custom(1, 1, ParamVector{vec({1.0}), 2.0},
                        [](const State& x, const Control& u, const Disturbance& w, const Eigen::VectorXd& th) {
                            return State(th[0] * x + u + w);
                        },
                        1.0);
    EXPECT_THROW(LeastSquaresEstimator{}.estimate({data, 4, custom}), ConfigError);
}
