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
#ifndef RHC_TESTS_FIXTURES_HPP
#define RHC_TESTS_FIXTURES_HPP

#include "rhc/rhc.hpp"

#include <cstdint>
#include <memory>
#include <random>

namespace rhc::testing {

inline Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v[i++] = x;
    }
    return v;
}

inline DisturbanceSequence scalar_seq(std::initializer_list<double> values) {
    DisturbanceSequence out;
    for (double x : values) {
        out.push_back(vec({x}));
    }
    return out;
}

/// x' = a x + b u + w with c = q x^2 + r u^2.
struct ScalarScenario {
    std::shared_ptr<LinearSystem> model;
    std::shared_ptr<QuadraticCost> costs;
    Box box;

    ScalarScenario(double a = 1.0, double b = 1.0, double q = 1.0, double r = 1.0,
                   double u_max = std::numeric_limits<double>::infinity(), int t_end = 10000)
        : model(std::make_shared<LinearSystem>(scalar(a), scalar(b))),
          costs(std::make_shared<QuadraticCost>(scalar(q), scalar(r), t_end)),
          box(std::isfinite(u_max) ? Box::symmetric(1, u_max) : Box::unbounded(1)) {}
};

/// Lightly damped oscillator with one actuator.
struct PlanarScenario {
    std::shared_ptr<LinearSystem> model;
    std::shared_ptr<QuadraticCost> costs;
    Box box;

    explicit PlanarScenario(int t_end = 10000, double modulation = 0.0) {
        Eigen::MatrixXd A(2, 2);
        A << 1.0, 0.1, -0.1, 0.98;
        Eigen::MatrixXd B(2, 1);
        B << 0.0, 0.1;
        model = std::make_shared<LinearSystem>(A, B);
        QuadraticCost::Options opt;
        opt.modulation_amplitude = modulation;
        opt.modulation_period = 25.0;
        costs = std::make_shared<QuadraticCost>(Eigen::MatrixXd::Identity(2, 2),
                                                0.1 * Eigen::MatrixXd::Identity(1, 1), t_end, opt);
        box = Box::unbounded(1);
    }
};

/// Seeded generator of random test inputs.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Eigen::VectorXd vector(int dim, double bound) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) {
            v[i] = uniform(-bound, bound);
        }
        return v;
    }

    Eigen::VectorXd in_ball(int dim, double radius) {
        Eigen::VectorXd v = vector(dim, 1.0);
        while (v.norm() > 1.0 || v.norm() == 0.0) {
            v = vector(dim, 1.0);
        }
        return radius * v;
    }

    DisturbanceSequence window(int M, int dim, double radius, bool zero_last = false) {
        DisturbanceSequence out;
        for (int k = 0; k < M; ++k) {
            out.push_back(zero_last && k == M - 1 ? Eigen::VectorXd(Eigen::VectorXd::Zero(dim))
                                                  : in_ball(dim, radius));
        }
        return out;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace rhc::testing

#endif // RHC_TESTS_FIXTURES_HPP
