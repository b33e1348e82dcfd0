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
#include "rhc/types.hpp"

#include "rhc/errors.hpp"

#include <cmath>
#include <limits>

namespace rhc {

Box Box::unbounded(int dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return Box{Eigen::VectorXd::Constant(dim, -inf), Eigen::VectorXd::Constant(dim, inf)};
}

Box Box::symmetric(int dim, double bound) {
    if (!(bound >= 0.0)) {
        throw ConfigError("box bound must be nonnegative");
    }
    return Box{Eigen::VectorXd::Constant(dim, -bound), Eigen::VectorXd::Constant(dim, bound)};
}

bool Box::contains(const Eigen::VectorXd& v) const {
    if (v.size() != lower.size()) {
        return false;
    }
    return ((v.array() >= lower.array()) && (v.array() <= upper.array())).all();
}

Eigen::VectorXd Box::project(const Eigen::VectorXd& v) const {
    return v.cwiseMax(lower).cwiseMin(upper);
}

void Box::validate() const {
    if (lower.size() != upper.size()) {
        throw ConfigError("box bounds differ in dimension");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
            throw ConfigError("box coordinate " + std::to_string(i) + " has lower > upper or NaN");
        }
    }
}

double squared_norm_sum(const DisturbanceSequence& ws) {
    double total = 0.0;
    for (const auto& w : ws) {
        total += w.squaredNorm();
    }
    return total;
}

void require_dim(const Eigen::VectorXd& v, int dim, const std::string& what) {
    if (v.size() != dim) {
        throw ConfigError(what + " has dimension " + std::to_string(v.size()) + ", expected " +
                          std::to_string(dim));
    }
    if (!v.allFinite()) {
        throw ConfigError(what + " has non-finite entries");
    }
}

} // namespace rhc
