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
#ifndef RHC_HARNESS_IO_HPP
#define RHC_HARNESS_IO_HPP

#include "rhc_harness/runner.hpp"

#include <filesystem>
#include <string>

namespace rhc::harness {

/// Shortest decimal text that parses back to the same double; "nan", "inf" and "-inf" otherwise.
std::string format_double(double v);

/// Header: t, x_i..., u_i..., w_i..., stage_cost, V_t, cumulative_cost, cumulative_energy, seed.
std::string trajectory_csv(const Trajectory& trajectory, std::uint64_t seed);

/// Header: cell, params..., seed, gamma_label, gamma, R_p_T, total_cost, total_energy,
/// control_R_p_T, control_cost, control_energy, status, error.
std::string sweep_csv(const SweepResult& result);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// error.json: kind, message, exit code and the seed of the failed run.
nlohmann::json error_json(const std::string& kind, const std::string& message, int exit_code,
                          std::uint64_t seed);

} // namespace rhc::harness

#endif // RHC_HARNESS_IO_HPP
