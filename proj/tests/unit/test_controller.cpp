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

DisturbanceSpec zero_spec(int dim) {
    DisturbanceSpec s;
    s.dim = dim;
    return s;
}

DisturbanceSpec random_spec(int dim, double w_c, std::uint64_t seed) {
    DisturbanceSpec s;
    s.kind = DisturbanceKind::UniformRandom;
    s.dim = dim;
    s.w_c = w_c;
    s.seed = seed;
    return s;
}

OnlineRunConfig config(int T, int M, std::optional<int> N = std::nullopt) {
    OnlineRunConfig c;
    c.T = T;
    c.M = M;
    c.N = N;
    return c;
}

} // namespace

TEST(KnownPreview, ScalarDeadbeatHalving) {
    // With M = 2 and zero preview the policy is u = -x/2, so x halves every step.
    ScalarScenario sc;
    const auto traj = run_known_preview({*sc.model, *sc.costs, sc.box, vec({1.0})}, zero_spec(1), config(3, 2));
    ASSERT_EQ(traj.size(), 3u);
    EXPECT_NEAR(traj.at_time(2).x[0], 0.5, 1e-12);
    EXPECT_NEAR(traj.at_time(3).x[0], 0.25, 1e-12);
    EXPECT_NEAR(traj.at_time(3).u[0], -0.125, 1e-12);
    EXPECT_NEAR(traj.total_cost(), 1.25 + 0.3125 + 0.078125, 1e-12);
    EXPECT_NEAR(traj.at_time(2).value, 1.5 * 0.25, 1e-12);
    EXPECT_NEAR((*traj.final_state())[0], 0.125, 1e-12);
    EXPECT_EQ(traj.kind(), ControllerKind::KnownPreview);
}

TEST(KnownPreview, CostHorizonMayEndExactlyAtT) {
    ScalarScenario sc(1.0, 1.0, 1.0, 1.0, std::numeric_limits<double>::infinity(), 20);
    const auto traj = run_known_preview({*sc.model, *sc.costs, sc.box, vec({1.0})},
                                        random_spec(1, 0.3, 1), config(20, 4));
    EXPECT_EQ(traj.size(), 20u);
}

TEST(KnownPreview, StartsAtRequestedTime) {
    PlanarScenario sc;
    auto cfg = config(30, 3);
    cfg.t_start = 11;
    const auto traj = run_known_preview({*sc.model, *sc.costs, sc.box, vec({1.0, 0.0})}, random_spec(2, 0.2, 3), cfg);
    EXPECT_EQ(traj.records().front().t, 11);
    EXPECT_EQ(traj.size(), 20u);
    EXPECT_EQ(traj.records().front().w, disturbance_at(random_spec(2, 0.2, 3), 11));
}

TEST(KnownPreview, AppliedControlIsFirstOfHorizonPlan) {
    PlanarScenario sc(200, 0.3);
    const auto spec = random_spec(2, 0.5, 4);
    const auto traj = run_known_preview({*sc.model, *sc.costs, sc.box, vec({2.0, -1.0})}, spec, config(60, 5));
    for (const auto& r : traj.records()) {
        auto padded = spec;
        padded.horizon_end = 60;
        const auto sol = solve_horizon(*sc.model, *sc.costs, sc.box, r.t, r.x, generate_window(padded, r.t, 5), 5);
        EXPECT_LE((sol.controls.front() - r.u).norm(), 1e-12);
        EXPECT_NEAR(sol.value, r.value, 1e-12 * std::max(1.0, r.value));
    }
}

TEST(KnownPreview, PreviewBeyondTIsZero) {
    ScalarScenario sc;
    auto spec = zero_spec(1);
    spec.kind = DisturbanceKind::Constant;
    spec.w_c = 0.5;
    const auto traj = run_known_preview({*sc.model, *sc.costs, sc.box, vec({0.0})}, spec, config(5, 3));
    // At t = T only w_T is nonzero; later preview entries are padded with zeros.
    const auto sol = solve_horizon(*sc.model, *sc.costs, sc.box, 5, traj.at_time(5).x, scalar_seq({0.5, 0.0, 0.0}), 3);
    EXPECT_NEAR(sol.controls.front()[0], traj.at_time(5).u[0], 1e-12);
}

TEST(KnownPreview, RunsAreDeterministic) {
    PlanarScenario sc;
    const ControlProblem p{*sc.model, *sc.costs, sc.box, vec({1.0, 1.0})};
    const auto a = run_known_preview(p, random_spec(2, 0.4, 9), config(40, 3));
    const auto b = run_known_preview(p, random_spec(2, 0.4, 9), config(40, 3));
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a.records()[k].u, b.records()[k].u);
        EXPECT_EQ(a.records()[k].x, b.records()[k].x);
    }
}

TEST(OnlineRunConfig, ValidationErrors) {
    ScalarScenario sc;
    const ControlProblem p{*sc.model, *sc.costs, sc.box, vec({1.0})};
    EXPECT_THROW(run_known_preview(p, zero_spec(1), config(10, 1)), ConfigError);
    EXPECT_THROW(run_known_preview(p, zero_spec(1), config(3, 3)), ConfigError);
    EXPECT_THROW(run_known_preview(p, zero_spec(2), config(10, 2)), ConfigError);
    auto greedy = zero_spec(1);
    greedy.kind = DisturbanceKind::GreedyAdversarial;
    EXPECT_THROW(run_known_preview(p, greedy, config(10, 2)), ConfigError);

    ScalarScenario short_costs(1.0, 1.0, 1.0, 1.0, std::numeric_limits<double>::infinity(), 5);
    EXPECT_THROW(run_known_preview({*sc.model, *short_costs.costs, sc.box, vec({1.0})}, zero_spec(1), config(10, 2)),
                 ConfigError);

    const ControlProblem boxed{*sc.model, *sc.costs, Box::symmetric(1, 1.0), vec({1.0})};
    const LeastSquaresEstimator ls;
    EXPECT_THROW(run_unknown_preview(boxed, zero_spec(1), ls, config(10, 2)), ConfigError);
    EXPECT_THROW(run_unknown_preview(boxed, zero_spec(1), ls, config(10, 2, 0)), ConfigError);
    EXPECT_THROW(run_unknown_preview(boxed, zero_spec(1), ls, config(10, 2, 10)), ConfigError);
    EXPECT_THROW(run_minmax_no_preview(p, zero_spec(1), -1.0, config(10, 2)), ConfigError);
}

TEST(KnownPreview, DivergenceCarriesPartialTrajectory) {
    ScalarScenario sc(3.0, 1.0, 1.0, 1.0, 0.01);
    auto cfg = config(100, 2);
    cfg.state_ceiling = 1e3;
    try {
        run_known_preview({*sc.model, *sc.costs, sc.box, vec({1.0})}, zero_spec(1), cfg);
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_GT(e.partial().size(), 3u);
        EXPECT_LT(e.partial().size(), 100u);
        EXPECT_NE(std::string(e.what()).find("diverged"), std::string::npos);
    }
}

TEST(UnknownPreview, ProbesThenPlansWithExactEstimate) {
    ScalarScenario sc(1.1, 0.7);
    const Box box = Box::symmetric(1, 5.0);
    const ControlProblem p{*sc.model, *sc.costs, box, vec({1.0})};
    auto cfg = config(30, 3, 4);
    cfg.seed = 17;
    const auto spec = random_spec(1, 0.3, 2);
    const auto traj = run_unknown_preview(p, spec, LeastSquaresEstimator{}, cfg);
    EXPECT_EQ(traj.control_phase_start(), 4);
    ASSERT_TRUE(traj.estimate().has_value());
    EXPECT_EQ(traj.estimate()->samples, 3);
    EXPECT_LT(*traj.estimate()->actual_error, 1e-10);
    for (const auto& r : traj.records()) {
        if (r.t < 4) {
            EXPECT_TRUE(std::isnan(r.value));
            EXPECT_EQ(r.u, probe_input(r.t, 1, box, 17));
        } else {
            auto padded = spec;
            padded.horizon_end = 30;
            const auto sol = solve_horizon(*sc.model, *sc.costs, box, r.t, r.x, generate_window(padded, r.t, 3), 3);
            EXPECT_NEAR(sol.controls.front()[0], r.u[0], 1e-8);
        }
    }
}

TEST(UnknownPreview, PlansWithEstimateWhilePlantUsesTruth) {
    ScalarScenario sc;
    const Box box = Box::symmetric(1, 5.0);
    const ControlProblem p{*sc.model, *sc.costs, box, vec({1.0})};
    const auto traj = run_unknown_preview(p, zero_spec(1), SyntheticEstimator(0.5, 3), config(20, 2, 5));
    const Eigen::VectorXd theta_hat = traj.estimate()->theta_hat.values;
    EXPECT_NEAR(*traj.estimate()->actual_error, 0.5 / std::sqrt(5.0), 1e-14);
    for (const auto& r : traj.records()) {
        if (r.t >= 5) {
            const auto planned = kappa_M(*sc.model, *sc.costs, box, r.t, r.x, scalar_seq({0, 0}), 2, theta_hat);
            EXPECT_NEAR(planned[0], r.u[0], 1e-10);
        }
        if (r.t > 1) {
            const auto& prev = traj.at_time(r.t - 1);
            EXPECT_NEAR(r.x[0], prev.x[0] + prev.u[0] + prev.w[0], 1e-14);
        }
    }
}

TEST(MinMax, RealizedDisturbancesStayInBallAndValuesAreRecorded) {
    PlanarScenario sc;
    const ControlProblem p{*sc.model, *sc.costs, sc.box, vec({1.0, 0.0})};
    const auto traj = run_minmax_no_preview(p, random_spec(2, 0.3, 5), 0.3, config(25, 3));
    EXPECT_EQ(traj.disturbance_bound(), 0.3);
    for (const auto& r : traj.records()) {
        EXPECT_LE(r.w.norm(), 0.3 + 1e-12);
        EXPECT_GE(r.value, r.stage_cost - 1e-9);
    }
}

TEST(MinMax, GreedyAdversaryReactsToState) {
    ScalarScenario sc;
    auto greedy = zero_spec(1);
    greedy.kind = DisturbanceKind::GreedyAdversarial;
    greedy.w_c = 0.2;
    const auto traj = run_minmax_no_preview({*sc.model, *sc.costs, sc.box, vec({1.0})}, greedy, 0.2, config(15, 2));
    for (const auto& r : traj.records()) {
        EXPECT_EQ(std::abs(r.w[0]), 0.2);
        const double next = r.x[0] + r.u[0];
        if (std::abs(next) > 1e-9) {
            EXPECT_EQ(std::signbit(r.w[0]), std::signbit(next));
        }
    }
}

TEST(MinMax, DisturbanceOutsideDeclaredBallIsRejected) {
    ScalarScenario sc;
    auto spec = zero_spec(1);
    spec.kind = DisturbanceKind::Constant;
    spec.w_c = 1.0;
    EXPECT_THROW(run_minmax_no_preview({*sc.model, *sc.costs, sc.box, vec({1.0})}, spec, 0.5, config(5, 2)),
                 ConfigError);
}
