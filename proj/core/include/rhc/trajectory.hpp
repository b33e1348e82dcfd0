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
#ifndef RHC_TRAJECTORY_HPP
#define RHC_TRAJECTORY_HPP

#include "rhc/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rhc {

enum class ControllerKind { KnownPreview, UnknownPreview, MinMax };

std::string to_string(ControllerKind kind);

/// One closed-loop step. value is NaN while the unknown-system controller probes.
struct StepRecord {
    int t = 0;
    State x;
    Control u;
    Disturbance w;
    double stage_cost = 0.0;
    double value = 0.0;
};

/**
 * @brief Closed-loop record of an online run.
 *
 * total_cost() and energy() are running sums over the appended records, so
 * they always equal the sums of the stored stage costs and squared
 * disturbance norms.
 */
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(ControllerKind kind, int horizon);

    void append(StepRecord record);
    void set_final_state(State x) { final_state_ = std::move(x); }

    const std::vector<StepRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const StepRecord& at_time(int t) const;

    double total_cost() const { return total_cost_; }
    double energy() const { return energy_; }

    /// Sums restricted to records with record.t >= t.
    double cost_from(int t) const;
    double energy_from(int t) const;

    ControllerKind kind() const { return kind_; }
    int horizon() const { return horizon_; }
    const std::optional<State>& final_state() const { return final_state_; }

    /// First step of the control phase; 1 unless the unknown-system controller ran.
    int control_phase_start() const { return control_phase_start_; }
    void set_control_phase_start(int t) { control_phase_start_ = t; }

    const std::optional<EstimateReport>& estimate() const { return estimate_; }
    void set_estimate(EstimateReport report) { estimate_ = std::move(report); }

    /// Radius of the disturbance set the min-max controller planned against.
    const std::optional<double>& disturbance_bound() const { return w_c_; }
    void set_disturbance_bound(double w_c) { w_c_ = w_c; }

    /// Disturbances applied at times t..t+count-1; zero beyond the last record.
    DisturbanceSequence disturbance_window(int t, int count) const;

private:
    ControllerKind kind_ = ControllerKind::KnownPreview;
    int horizon_ = 0;
    std::vector<StepRecord> records_;
    double total_cost_ = 0.0;
    double energy_ = 0.0;
    std::optional<State> final_state_;
    int control_phase_start_ = 1;
    std::optional<EstimateReport> estimate_;
    std::optional<double> w_c_;
};

} // namespace rhc

#endif // RHC_TRAJECTORY_HPP
