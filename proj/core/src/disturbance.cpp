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
#include "rhc/disturbance.hpp"

#include "rhc/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace rhc {

std::string to_string(DisturbanceKind kind) {
    switch (kind) {
    case DisturbanceKind::Zero:
        return "zero";
    case DisturbanceKind::Constant:
        return "constant";
    case DisturbanceKind::Sinusoid:
        return "sinusoid";
    case DisturbanceKind::UniformRandom:
        return "uniform_random";
    case DisturbanceKind::SignFlip:
        return "sign_flip";
    case DisturbanceKind::GreedyAdversarial:
        return "greedy_adversarial";
    case DisturbanceKind::Impulse:
        return "impulse";
    case DisturbanceKind::Sequence:
        return "sequence";
    }
    return "unknown";
}

DisturbanceKind disturbance_kind_from_string(const std::string& name) {
    for (auto kind : {DisturbanceKind::Zero, DisturbanceKind::Constant, DisturbanceKind::Sinusoid,
                      DisturbanceKind::UniformRandom, DisturbanceKind::SignFlip,
                      DisturbanceKind::GreedyAdversarial, DisturbanceKind::Impulse,
                      DisturbanceKind::Sequence}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw ConfigError("unknown disturbance kind '" + name + "'");
}

void DisturbanceSpec::validate() const {
    if (dim < 1) {
        throw ConfigError("disturbance dimension must be positive");
    }
    if (!(w_c >= 0.0) || !std::isfinite(w_c)) {
        throw ConfigError("disturbance bound w_c must be finite and nonnegative");
    }
    if (amplitude && !(*amplitude >= 0.0 && *amplitude <= w_c)) {
        throw ConfigError("disturbance amplitude must lie in [0, w_c]");
    }
    if (kind == DisturbanceKind::Sinusoid && !(period > 0.0)) {
        throw ConfigError("sinusoid period must be positive");
    }
    if (kind == DisturbanceKind::SignFlip && flip_interval < 1) {
        throw ConfigError("sign-flip interval must be at least 1");
    }
    if (direction.size() != 0) {
        if (direction.size() != dim || !(direction.norm() > 0.0) || !direction.allFinite()) {
            throw ConfigError("disturbance direction must be a nonzero vector of dimension " +
                              std::to_string(dim));
        }
    }
    if (horizon_end < 0) {
        throw ConfigError("disturbance horizon_end must be nonnegative");
    }
    if (kind == DisturbanceKind::Sequence) {
        for (std::size_t k = 0; k < sequence.size(); ++k) {
            if (sequence[k].size() != dim) {
                throw ConfigError("replayed disturbance has the wrong dimension");
            }
            if (sequence[k].norm() > w_c * (1.0 + 1e-12) + 1e-15) {
                throw ConfigError("replayed disturbance at t=" + std::to_string(k + 1) +
                                  " exceeds w_c");
            }
        }
    }
}

Eigen::VectorXd DisturbanceSpec::unit_direction() const {
    if (direction.size() == 0) {
        return Eigen::VectorXd::Ones(dim) / std::sqrt(static_cast<double>(dim));
    }
    return direction / direction.norm();
}

Disturbance disturbance_at(const DisturbanceSpec& spec, int t) {
    if (t < 1) {
        throw ConfigError("disturbance time index must be at least 1");
    }
    if (spec.adaptive()) {
        throw ConfigError("the greedy adversary needs the current state and control");
    }
    const int n = spec.dim;
    if (spec.horizon_end > 0 && t > spec.horizon_end) {
        return Disturbance::Zero(n);
    }
    const double peak = spec.peak();
    switch (spec.kind) {
    case DisturbanceKind::Zero:
        return Disturbance::Zero(n);
    case DisturbanceKind::Constant:
        return peak * spec.unit_direction();
    case DisturbanceKind::Sinusoid:
        return peak * std::sin(2.0 * std::numbers::pi * t / spec.period + spec.phase) *
               spec.unit_direction();
    case DisturbanceKind::SignFlip: {
        const int block = (t - 1) / spec.flip_interval;
        return (block % 2 == 0 ? peak : -peak) * spec.unit_direction();
    }
    case DisturbanceKind::Impulse:
        return t == spec.impulse_time ? Disturbance(peak * spec.unit_direction())
                                      : Disturbance(Disturbance::Zero(n));
    case DisturbanceKind::UniformRandom: {
        std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                          static_cast<std::uint32_t>(spec.seed >> 32), static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd d(n);
        do {
            for (int i = 0; i < n; ++i) {
                d[i] = normal(rng);
            }
        } while (d.norm() == 0.0);
        const double r = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return (spec.w_c * std::pow(r, 1.0 / n) / d.norm()) * d;
    }
    case DisturbanceKind::Sequence: {
        const auto idx = static_cast<std::size_t>(t - 1);
        return idx < spec.sequence.size() ? spec.sequence[idx] : Disturbance(Disturbance::Zero(n));
    }
    case DisturbanceKind::GreedyAdversarial:
        break;
    }
    throw ConfigError("unsupported disturbance kind");
}

Disturbance greedy_disturbance(const DisturbanceSpec& spec, const GreedyContext& context) {
    const int n = spec.dim;
    if (context.model.state_dim() != n) {
        throw ConfigError("greedy adversary dimension disagrees with the model");
    }
    if (spec.horizon_end > 0 && context.t > spec.horizon_end) {
        return Disturbance::Zero(n);
    }
    const double r = spec.peak();
    std::vector<Disturbance> candidates;
    if (n == 1) {
        candidates = {Disturbance::Constant(1, r), Disturbance::Constant(1, -r)};
    } else if (n == 2) {
        for (int k = 0; k < 64; ++k) {
            const double angle = 2.0 * std::numbers::pi * k / 64.0;
            Disturbance w(2);
            w << r * std::cos(angle), r * std::sin(angle);
            candidates.push_back(w);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            candidates.push_back(r * Disturbance::Unit(n, i));
            candidates.push_back(-r * Disturbance::Unit(n, i));
        }
        std::mt19937_64 rng(spec.seed ^ 0x6a09e667f3bcc909ULL);
        std::normal_distribution<double> normal(0.0, 1.0);
        while (candidates.size() < 64) {
            Disturbance d(n);
            for (int i = 0; i < n; ++i) {
                d[i] = normal(rng);
            }
            if (d.norm() > 0.0) {
                candidates.push_back((r / d.norm()) * d);
            }
        }
    }
    const Control zero_u = Control::Zero(context.model.control_dim());
    Disturbance best = Disturbance::Zero(n);
    double best_value = -1.0;
    for (const auto& w : candidates) {
        const State next = step(context.model, context.x, context.u, w);
        const double v = context.costs.stage_clamped(context.t + 1, next, zero_u);
        if (v > best_value) {
            best_value = v;
            best = w;
        }
    }
    return best;
}

DisturbanceSequence generate_window(const DisturbanceSpec& spec, int t, int M,
                                    const GreedyContext* context) {
    if (M < 0) {
        throw ConfigError("window length must be nonnegative");
    }
    if (spec.adaptive()) {
        if (!context) {
            throw ConfigError("the greedy adversary needs the current state and control");
        }
        if (M != 1) {
            throw ConfigError("the greedy adversary reacts to the state and cannot be previewed");
        }
        return {greedy_disturbance(spec, *context)};
    }
    DisturbanceSequence window;
    window.reserve(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) {
        window.push_back(disturbance_at(spec, t + k));
    }
    return window;
}

double energy(const DisturbanceSequence& disturbances) { return squared_norm_sum(disturbances); }

} // namespace rhc
