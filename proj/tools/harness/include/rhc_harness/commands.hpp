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
#ifndef RHC_HARNESS_COMMANDS_HPP
#define RHC_HARNESS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rhc::harness {

struct CommandOptions {
    std::filesystem::path scenario;
    std::filesystem::path out = ".";
    std::optional<std::uint64_t> seed;
    std::vector<double> gamma;
    /// "name=v1,v2;name2=..."; replaces the scenario's sweep grid when set.
    std::optional<std::string> grid;
    unsigned threads = 0;
};

/// Writes trajectory.csv, metrics.json and constants.json, plus error.json on failure.
int cmd_run(const CommandOptions& options, std::ostream& log);

/// cmd_run followed by certification.json; nonzero when any residual exceeds its tolerance.
int cmd_certify(const CommandOptions& options, std::ostream& log);

/// Writes sweep.csv; failing cells are recorded and do not change the exit code.
int cmd_sweep(const CommandOptions& options, std::ostream& log);

/// Parses argv with the subcommands run, certify and sweep and maps exceptions to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& log);

} // namespace rhc::harness

#endif // RHC_HARNESS_COMMANDS_HPP
