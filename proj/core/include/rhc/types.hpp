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
#ifndef RHC_TYPES_HPP
#define RHC_TYPES_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace rhc {

using State = Eigen::VectorXd;
using Control = Eigen::VectorXd;
using Disturbance = Eigen::VectorXd;

using StateSequence = std::vector<State>;
using ControlSequence = std::vector<Control>;
using DisturbanceSequence = std::vector<Disturbance>;

/**
 * @brief Per-coordinate box defining the admissible control set U.
 *
 * Infinite bounds are allowed; projection onto a box is exact, so solvers
 * can guarantee feasibility of every returned control.
 */
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    static Box unbounded(int dim);
    static Box symmetric(int dim, double bound);

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Eigen::VectorXd& v) const;
    Eigen::VectorXd project(const Eigen::VectorXd& v) const;
    void validate() const;
};

/// Model parameter together with its norm bound S.
struct ParamVector {
    Eigen::VectorXd values;
    double bound = 0.0;

    double norm() const { return values.norm(); }
    bool within_bound() const { return values.norm() <= bound; }
};

/// Euclidean ball of radius w_c holding every admissible disturbance.
struct DisturbanceBall {
    int dim = 0;
    double radius = 0.0;

    bool contains(const Disturbance& w, double tol = 1e-12) const { return w.norm() <= radius + tol; }
};

/// Output of an estimation procedure; actual_error is filled only when the true parameter is known.
struct EstimateReport {
    ParamVector theta_hat;
    int samples = 0;
    double g_of_N = 0.0;
    std::optional<double> actual_error;
};

double squared_norm_sum(const DisturbanceSequence& ws);

void require_dim(const Eigen::VectorXd& v, int dim, const std::string& what);

} // namespace rhc

#endif // RHC_TYPES_HPP
