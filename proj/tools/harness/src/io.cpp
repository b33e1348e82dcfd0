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
#include "rhc_harness/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rhc::harness {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += '"';
        }
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

void append_vector(std::ostringstream& os, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        os << ',' << format_double(v[i]);
    }
}

} // namespace

std::string trajectory_csv(const Trajectory& trajectory, std::uint64_t seed) {
    std::ostringstream os;
    int n = 0;
    int m = 0;
    if (!trajectory.empty()) {
        n = static_cast<int>(trajectory.records().front().x.size());
        m = static_cast<int>(trajectory.records().front().u.size());
    }
    os << 't';
    for (int i = 0; i < n; ++i) {
        os << ",x" << i;
    }
    for (int i = 0; i < m; ++i) {
        os << ",u" << i;
    }
    for (int i = 0; i < n; ++i) {
        os << ",w" << i;
    }
    os << ",stage_cost,V_t,cumulative_cost,cumulative_energy,seed\n";
    double cost = 0.0;
    double energy = 0.0;
    for (const auto& r : trajectory.records()) {
        cost += r.stage_cost;
        energy += r.w.squaredNorm();
        os << r.t;
        append_vector(os, r.x);
        append_vector(os, r.u);
        append_vector(os, r.w);
        os << ',' << format_double(r.stage_cost) << ',' << format_double(r.value) << ','
           << format_double(cost) << ',' << format_double(energy) << ',' << seed << '\n';
    }
    return os.str();
}

std::string sweep_csv(const SweepResult& result) {
    std::ostringstream os;
    os << "cell";
    for (const auto& name : result.param_names) {
        os << ',' << csv_field(name);
    }
    os << ",seed,gamma_label,gamma,R_p_T,total_cost,total_energy,control_R_p_T,control_cost,"
          "control_energy,status,error\n";
    for (const auto& r : result.rows) {
        os << r.cell;
        for (double p : r.params) {
            os << ',' << format_double(p);
        }
        os << ',' << r.seed << ',' << csv_field(r.gamma_label) << ',' << format_double(r.gamma) << ','
           << format_double(r.regret) << ',' << format_double(r.total_cost) << ','
           << format_double(r.total_energy) << ',' << format_double(r.control_regret) << ','
           << format_double(r.control_cost) << ',' << format_double(r.control_energy) << ','
           << csv_field(r.status) << ',' << csv_field(r.error) << '\n';
    }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

nlohmann::json error_json(const std::string& kind, const std::string& message, int exit_code,
                          std::uint64_t seed) {
    return {{"error", kind}, {"message", message}, {"exit_code", exit_code}, {"seed", seed}};
}

} // namespace rhc::harness
