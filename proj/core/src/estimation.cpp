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
#include "rhc/estimation.hpp"

#include "rhc/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>
#include <sstream>

namespace rhc {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_rank(const Eigen::MatrixXd& Z, const std::string& what) {
    if (Z.rows() < Z.cols()) {
        std::ostringstream msg;
        msg << what << " regressor is rank deficient: " << Z.rows() << " equations for " << Z.cols()
            << " unknowns (estimation phase too short)";
        throw RankDeficiencyError(msg.str());
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Z);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
    if (!(smax > 0.0) || smin <= kRankTolerance * smax) {
        std::ostringstream msg;
        msg << what << " regressor is rank deficient (sigma_min=" << smin << ", sigma_max=" << smax
            << "); the probe inputs are not exciting enough";
        throw RankDeficiencyError(msg.str());
    }
}

// Normal equations with one step of iterative refinement.
Eigen::MatrixXd normal_equations(const Eigen::MatrixXd& Z, const Eigen::MatrixXd& Y) {
    const Eigen::MatrixXd gram = Z.transpose() * Z;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    Eigen::MatrixXd X = ldlt.solve(Z.transpose() * Y);
    X += ldlt.solve(Z.transpose() * (Y - Z * X));
    return X;
}

EstimateReport make_report(Eigen::VectorXd theta_hat, int samples, double g,
                           const std::optional<Eigen::VectorXd>& theta_true) {
    EstimateReport report;
    report.theta_hat = ParamVector{std::move(theta_hat), 0.0};
    report.theta_hat.bound = report.theta_hat.norm();
    report.samples = samples;
    report.g_of_N = g;
    if (theta_true) {
        if (theta_true->size() != report.theta_hat.values.size()) {
            throw ConfigError("true parameter dimension disagrees with the estimate");
        }
        report.actual_error = (report.theta_hat.values - *theta_true).norm();
    }
    return report;
}

void check_tuples(const Dataset& data) {
    if (data.tuples.empty()) {
        throw RankDeficiencyError("estimation dataset is empty");
    }
    const auto n = data.tuples.front().x.size();
    const auto m = data.tuples.front().u.size();
    for (const auto& d : data.tuples) {
        if (d.x.size() != n || d.x_next.size() != n || d.w.size() != n || d.u.size() != m) {
            throw ConfigError("estimation dataset has inconsistent dimensions");
        }
    }
}

} // namespace

void Dataset::add(State x_next, State x, Control u, Disturbance w) {
    tuples.push_back(DataTuple{std::move(x_next), std::move(x), std::move(u), std::move(w)});
}

Control probe_input(int t, int control_dim, const Box& box, std::uint64_t seed) {
    if (box.dim() != control_dim) {
        throw ConfigError("probe box dimension disagrees with the control dimension");
    }
    if (!box.lower.allFinite() || !box.upper.allFinite()) {
        throw ConfigError("probe inputs need a bounded control box");
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    Control u(control_dim);
    for (int i = 0; i < control_dim; ++i) {
        u[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * uniform01(rng);
    }
    return u;
}

EstimateReport estimate_linear(const Dataset& data, const std::optional<Eigen::VectorXd>& theta_true) {
    check_tuples(data);
    const int N = data.size();
    const int n = static_cast<int>(data.tuples.front().x.size());
    const int m = static_cast<int>(data.tuples.front().u.size());
    Eigen::MatrixXd Z(N, n + m);
    Eigen::MatrixXd Y(N, n);
    for (int k = 0; k < N; ++k) {
        const auto& d = data.tuples[static_cast<std::size_t>(k)];
        Z.row(k) << d.x.transpose(), d.u.transpose();
        Y.row(k) = (d.x_next - d.w).transpose();
    }
    check_rank(Z, "linear");
    const Eigen::MatrixXd X = normal_equations(Z, Y);
    const Eigen::MatrixXd A = X.topRows(n).transpose();
    const Eigen::MatrixXd B = X.bottomRows(m).transpose();
    return make_report(LinearSystem::pack(A, B), N, 0.0, theta_true);
}

EstimateReport estimate_linear_in_params(const Dataset& data,
                                         const LinearInParamsSystem::DriftFn& drift,
                                         const LinearInParamsSystem::RegressorFn& regressor,
                                         int param_dim,
                                         const std::optional<Eigen::VectorXd>& theta_true) {
    check_tuples(data);
    if (!drift || !regressor || param_dim < 1) {
        throw ConfigError("linear-in-params estimation needs drift, regressor and p >= 1");
    }
    const int N = data.size();
    const int n = static_cast<int>(data.tuples.front().x.size());
    Eigen::MatrixXd G(N * n, param_dim);
    Eigen::VectorXd y(N * n);
    for (int k = 0; k < N; ++k) {
        const auto& d = data.tuples[static_cast<std::size_t>(k)];
        const Eigen::MatrixXd Gk = regressor(d.x, d.u);
        if (Gk.rows() != n || Gk.cols() != param_dim) {
            throw ConfigError("regressor has the wrong shape");
        }
        G.block(k * n, 0, n, param_dim) = Gk;
        y.segment(k * n, n) = d.x_next - d.x - drift(d.x, d.u) - d.w;
    }
    check_rank(G, "linear-in-params");
    const Eigen::VectorXd theta = normal_equations(G, y);
    return make_report(theta, N, 0.0, theta_true);
}

EstimateReport synthetic_estimator(const ParamVector& theta_true, int N, double c_g,
                                   std::uint64_t seed) {
    if (N < 1) {
        throw ConfigError("synthetic estimator needs N >= 1");
    }
    if (!(c_g >= 0.0) || !std::isfinite(c_g)) {
        throw ConfigError("synthetic estimator scale c_g must be finite and nonnegative");
    }
    const auto p = theta_true.values.size();
    const double g = c_g / std::sqrt(static_cast<double>(N));
    Eigen::VectorXd theta_hat = theta_true.values;
    if (g > 0.0 && p > 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(N)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::VectorXd dir(p);
        do {
            for (Eigen::Index i = 0; i < p; ++i) {
                dir[i] = normal(rng);
            }
        } while (dir.norm() == 0.0);
        theta_hat += (g / dir.norm()) * dir;
    }
    EstimateReport report = make_report(theta_hat, N, g, theta_true.values);
    report.actual_error = (theta_hat - theta_true.values).norm();
    return report;
}

EstimateReport LeastSquaresEstimator::estimate(const EstimationContext& context) const {
    const Eigen::VectorXd& truth = context.model.theta().values;
    switch (context.model.kind()) {
    case SystemKind::Linear:
        return estimate_linear(context.data, truth);
    case SystemKind::LinearInParams: {
        const auto& lip = dynamic_cast<const LinearInParamsSystem&>(context.model);
        return estimate_linear_in_params(context.data, lip.drift(), lip.regressor(),
                                         lip.param_dim(), truth);
    }
    case SystemKind::CustomNonlinear:
        break;
    }
    throw ConfigError("least-squares estimation is not available for custom nonlinear systems");
}

SyntheticEstimator::SyntheticEstimator(double c_g, std::uint64_t seed) : c_g_(c_g), seed_(seed) {}

EstimateReport SyntheticEstimator::estimate(const EstimationContext& context) const {
    return synthetic_estimator(context.model.theta(), context.N, c_g_, seed_);
}

} // namespace rhc
