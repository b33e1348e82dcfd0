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
#include "rhc/trajectory.hpp"

#include "rhc/errors.hpp"

#include <algorithm>

namespace rhc {

std::string to_string(ControllerKind kind) {
    switch (kind) {
    case ControllerKind::KnownPreview:
        return "known_preview";
    case ControllerKind::UnknownPreview:
        return "unknown_preview";
    case ControllerKind::MinMax:
        return "minmax";
    }
    return "unknown";
}

Trajectory::Trajectory(ControllerKind kind, int horizon) : kind_(kind), horizon_(horizon) {}

void Trajectory::append(StepRecord record) {
    if (!records_.empty() && record.t != records_.back().t + 1) {
        throw ConfigError("trajectory records must have consecutive time indices");
    }
    total_cost_ += record.stage_cost;
    energy_ += record.w.squaredNorm();
    records_.push_back(std::move(record));
}

const StepRecord& Trajectory::at_time(int t) const {
    if (records_.empty()) {
        throw ConfigError("trajectory is empty");
    }
    const long idx = static_cast<long>(t) - records_.front().t;
    if (idx < 0 || idx >= static_cast<long>(records_.size())) {
        throw ConfigError("trajectory has no record at t=" + std::to_string(t));
    }
    return records_[static_cast<std::size_t>(idx)];
}

double Trajectory::cost_from(int t) const {
    double total = 0.0;
    for (const auto& r : records_) {
        if (r.t >= t) {
            total += r.stage_cost;
        }
    }
    return total;
}

double Trajectory::energy_from(int t) const {
    double total = 0.0;
    for (const auto& r : records_) {
        if (r.t >= t) {
            total += r.w.squaredNorm();
        }
    }
    return total;
}

DisturbanceSequence Trajectory::disturbance_window(int t, int count) const {
    DisturbanceSequence out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    const int n = records_.empty() ? 0 : static_cast<int>(records_.front().w.size());
    for (int k = 0; k < count; ++k) {
        const int tk = t + k;
        if (!records_.empty() && tk >= records_.front().t && tk <= records_.back().t) {
            out.push_back(at_time(tk).w);
        } else {
            out.push_back(Disturbance::Zero(n));
        }
    }
    return out;
}

} // namespace rhc
