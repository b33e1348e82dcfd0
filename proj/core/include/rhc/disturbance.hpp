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
#ifndef RHC_DISTURBANCE_HPP
#define RHC_DISTURBANCE_HPP

#include "rhc/cost.hpp"
#include "rhc/model.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace rhc {

enum class DisturbanceKind {
    Zero,
    Constant,
    Sinusoid,
    UniformRandom,
    SignFlip,
    GreedyAdversarial,
    Impulse,
    Sequence,
};

std::string to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& name);

/**
 * @brief Bounded disturbance process w_t, t = 1, 2, ...
 *
 * Every emitted value satisfies ||w_t|| <= w_c. Patterned kinds move along
 * a fixed unit direction (normalized ones vector by default). Values after
 * horizon_end are zero when horizon_end > 0.
 */
struct DisturbanceSpec {
    DisturbanceKind kind = DisturbanceKind::Zero;
    int dim = 1;
    double w_c = 0.0;
    /// Peak magnitude of patterned kinds; defaults to w_c.
    std::optional<double> amplitude;
    double period = 20.0;
    double phase = 0.0;
    int flip_interval = 1;
    Eigen::VectorXd direction;
    int impulse_time = 1;
    std::uint64_t seed = 0;
    int horizon_end = 0;
    /// Replayed values for the sequence kind, w_1 first.
    DisturbanceSequence sequence;

    void validate() const;
    bool adaptive() const { return kind == DisturbanceKind::GreedyAdversarial; }
    double peak() const { return amplitude.value_or(w_c); }
    Eigen::VectorXd unit_direction() const;
};

/// State-dependent information the greedy adversary reacts to.
struct GreedyContext {
    const SystemModel& model;
    const CostModel& costs;
    State x;
    Control u;
    int t;
};

/// w_t for a non-adaptive spec.
Disturbance disturbance_at(const DisturbanceSpec& spec, int t);

/**
 * @brief w_{t..t+M-1}.
 *
 * The greedy kind picks w_t on a boundary grid to maximize the next stage
 * cost c_{t+1}(f(x, u, w), 0); it needs a context and only serves windows of
 * length one, since a reactive adversary cannot be previewed.
 */
DisturbanceSequence generate_window(const DisturbanceSpec& spec, int t, int M,
                                    const GreedyContext* context = nullptr);

/// Approximate maximizer of the next stage cost: +-w_c in 1-D, 64 boundary directions otherwise.
Disturbance greedy_disturbance(const DisturbanceSpec& spec, const GreedyContext& context);

/// sum_t ||w_t||^2.
double energy(const DisturbanceSequence& disturbances);

} // namespace rhc

#endif // RHC_DISTURBANCE_HPP
