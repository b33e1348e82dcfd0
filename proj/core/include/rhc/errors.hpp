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
#ifndef RHC_ERRORS_HPP
#define RHC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rhc {

/// Invalid dimensions, out-of-range indices or inconsistent scenario settings.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The horizon is too short for the attenuation constants to exist.
class HorizonThresholdError : public ConfigError {
public:
    HorizonThresholdError(int horizon, int min_horizon, const std::string& detail)
        : ConfigError("horizon threshold violated: M=" + std::to_string(horizon) +
                      " but the horizon must satisfy M >= M_min=" + std::to_string(min_horizon) +
                      " (M > alpha_hi^2/alpha_lo^2 + 1)" + (detail.empty() ? "" : "; " + detail)),
          horizon_(horizon),
          min_horizon_(min_horizon) {}

    int horizon() const { return horizon_; }
    int min_horizon() const { return min_horizon_; }

private:
    int horizon_;
    int min_horizon_;
};

/// Regressors of an estimation dataset do not have full column rank.
class RankDeficiencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sample-based certification of value bounds could not produce finite constants.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rhc

#endif // RHC_ERRORS_HPP
