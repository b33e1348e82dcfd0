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
#include "rhc/rhc.hpp"

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

namespace {

using namespace rhc;

struct Plant {
    std::shared_ptr<LinearSystem> model;
    std::shared_ptr<QuadraticCost> costs;
    Box box;
};

// Planar oscillator with two actuators; n is the state dimension of a chain of copies.
Plant chain(int copies, bool boxed) {
    const int n = 2 * copies;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < copies; ++k) {
        A.block(2 * k, 2 * k, 2, 2) << 1.0, 0.2, -0.2, 0.9;
    }
    const Eigen::MatrixXd B = 0.5 * Eigen::MatrixXd::Identity(n, n);
    Plant p;
    p.model = std::make_shared<LinearSystem>(A, B);
    p.costs = std::make_shared<QuadraticCost>(Eigen::MatrixXd::Identity(n, n), 0.5 * Eigen::MatrixXd::Identity(n, n),
                                              100000);
    p.box = boxed ? Box::symmetric(n, 0.3) : Box::unbounded(n);
    return p;
}

DisturbanceSequence window(int n, int M, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-0.3, 0.3);
    DisturbanceSequence w;
    for (int k = 0; k < M; ++k) {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) {
            v[i] = U(rng);
        }
        w.push_back(v);
    }
    return w;
}

void BM_HorizonExact(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const Plant p = chain(1, false);
    const auto w = window(2, M, 1);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_horizon(*p.model, *p.costs, p.box, 1, x, w, M).value);
    }
}
BENCHMARK(BM_HorizonExact)->Arg(4)->Arg(11)->Arg(25)->Arg(50);

void BM_HorizonBoxed(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const Plant p = chain(1, true);
    const auto w = window(2, M, 2);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 2.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_horizon(*p.model, *p.costs, p.box, 1, x, w, M).value);
    }
}
BENCHMARK(BM_HorizonBoxed)->Arg(4)->Arg(11)->Arg(25);

void BM_HorizonStateDim(benchmark::State& state) {
    const int copies = static_cast<int>(state.range(0));
    const Plant p = chain(copies, false);
    const auto w = window(2 * copies, 11, 3);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(2 * copies, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_horizon(*p.model, *p.costs, p.box, 1, x, w, 11).value);
    }
}
BENCHMARK(BM_HorizonStateDim)->Arg(1)->Arg(4)->Arg(16);

void BM_MinMax(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const Plant p = chain(1, false);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_minmax(*p.model, *p.costs, p.box, 1, x, M, 0.5).value);
    }
}
BENCHMARK(BM_MinMax)->Arg(3)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ClosedLoopPreview(benchmark::State& state) {
    const Plant p = chain(1, false);
    DisturbanceSpec spec;
    spec.kind = DisturbanceKind::UniformRandom;
    spec.dim = 2;
    spec.w_c = 0.5;
    spec.seed = 4;
    OnlineRunConfig cfg;
    cfg.T = static_cast<int>(state.range(0));
    cfg.M = 11;
    const Eigen::VectorXd x1 = Eigen::VectorXd::Constant(2, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_known_preview({*p.model, *p.costs, p.box, x1}, spec, cfg).total_cost());
    }
    state.SetItemsProcessed(state.iterations() * cfg.T);
}
BENCHMARK(BM_ClosedLoopPreview)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_LeastSquaresEstimate(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const Plant p = chain(2, false);
    const Box probe_box = Box::symmetric(4, 1.0);
    Dataset data;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
    for (int t = 1; t <= N; ++t) {
        const Control u = probe_input(t, 4, probe_box, 9);
        const Eigen::VectorXd next = step(*p.model, x, u, Eigen::VectorXd::Zero(4));
        data.add(next, x, u, Eigen::VectorXd::Zero(4));
        x = next;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_linear(data).theta_hat.norm());
    }
}
BENCHMARK(BM_LeastSquaresEstimate)->Arg(16)->Arg(256)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
