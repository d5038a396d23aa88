// Copyright 2026 The ncflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ncflow/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ncflow {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Json cmatrix_to_json(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        fail(ErrorKind::InvalidInput, "CMatrix JSON encodes square matrices only");
    }
    Json entries = Json::array();
    for (Eigen::Index j = 0; j < a.rows(); ++j)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            entries.push_back(Json::array({a(j, k).real(), a(j, k).imag()}));
    return Json{{"n", a.rows()}, {"entries", std::move(entries)}};
}

CMatrix cmatrix_from_json(const Json& j) {
    try {
        const long n = j.at("n").get<long>();
        const Json& entries = j.at("entries");
        if (n < 1 || !entries.is_array() || static_cast<long>(entries.size()) != n * n) {
            fail(ErrorKind::InvalidInput, "CMatrix JSON: expected n*n entries");
        }
        CMatrix a(n, n);
        for (long r = 0; r < n; ++r)
            for (long c = 0; c < n; ++c) {
                const Json& e = entries.at(static_cast<std::size_t>(r * n + c));
                if (!e.is_array() || e.size() != 2) {
                    fail(ErrorKind::InvalidInput, "CMatrix JSON: entries must be [re, im] pairs");
                }
                a(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        return a;
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("CMatrix JSON: ") + e.what());
    }
}

Json geometry_to_json(const TorusGeometry& g) {
    return Json{{"n", g.params.n},
                {"m", g.params.m},
                {"q", Json::array({g.q.real(), g.q.imag()})},
                {"u", cmatrix_to_json(g.u)},
                {"v", cmatrix_to_json(g.v)},
                {"x", cmatrix_to_json(g.x)},
                {"y", cmatrix_to_json(g.y)}};
}

TorusGeometry geometry_from_json(const Json& j) {
    try {
        TorusGeometry g;
        g.params = {j.at("n").get<int>(), j.at("m").get<int>()};
        validate(g.params);
        const Json& q = j.at("q");
        g.q = Complex(q.at(0).get<double>(), q.at(1).get<double>());
        g.u = cmatrix_from_json(j.at("u"));
        g.v = cmatrix_from_json(j.at("v"));
        g.x = cmatrix_from_json(j.at("x"));
        g.y = cmatrix_from_json(j.at("y"));
        for (const CMatrix* a : {&g.u, &g.v, &g.x, &g.y}) {
            if (a->rows() != g.params.n) {
                fail(ErrorKind::InvalidInput, "geometry JSON: matrix dimension differs from n");
            }
        }
        return g;
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("geometry JSON: ") + e.what());
    }
}

std::string trajectory_csv(const FlowTrajectory& traj) {
    std::ostringstream os;
    const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().metric.n();
    os << "t";
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            os << ",c_re_" << j << '_' << k << ",c_im_" << j << '_' << k;
    os << ",trace,det,min_eig,dist_to_flat\n";
    for (const auto& s : traj.samples) {
        os << format_double(s.t);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                os << ',' << format_double(s.metric.c(j, k).real()) << ','
                   << format_double(s.metric.c(j, k).imag());
        const auto& d = s.diagnostics;
        os << ',' << format_double(d.trace) << ',' << format_double(d.det) << ','
           << format_double(d.min_eigenvalue) << ',' << format_double(d.dist_to_flat) << '\n';
    }
    return os.str();
}

Json trajectory_json(const FlowTrajectory& traj) {
    const FlowConfig& cfg = traj.config;
    Json samples = Json::array();
    for (const auto& s : traj.samples) {
        const auto& d = s.diagnostics;
        samples.push_back(Json{{"t", s.t},
                               {"c", cmatrix_to_json(s.metric.c)},
                               {"trace", d.trace},
                               {"det", d.det},
                               {"log_det", d.log_det},
                               {"min_eig", d.min_eigenvalue},
                               {"dist_to_flat", d.dist_to_flat}});
    }
    const auto& st = traj.stats;
    return Json{
        {"n", traj.params.n},
        {"m", traj.params.m},
        {"config", Json{{"t0", cfg.t0},
                        {"t1", cfg.t1},
                        {"rel_tol", cfg.rel_tol},
                        {"abs_tol", cfg.abs_tol},
                        {"max_step", cfg.max_step},
                        {"min_step", cfg.min_step},
                        {"initial_step", cfg.initial_step},
                        {"stride", cfg.sample_stride},
                        {"positivity_floor", cfg.positivity_floor}}},
        {"integrator", Json{{"method", "dormand-prince-5(4)"},
                            {"accepted_steps", st.accepted_steps},
                            {"rejected_steps", st.rejected_steps},
                            {"rhs_evaluations", st.rhs_evaluations},
                            {"smallest_step", st.smallest_step},
                            {"largest_step", st.largest_step}}},
        {"samples", std::move(samples)}};
}

Json spectrum_json(const SpectralData& spec, std::optional<double> t) {
    Json out = Json::object();
    if (t) out["t"] = *t;
    Json eigenvalues = Json::array();
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) eigenvalues.push_back(spec.eigenvalues(i));
    Json vectors = Json::array();
    for (const auto& a : spec.eigvecs_Hc) vectors.push_back(cmatrix_to_json(a));
    out["eigenvalues"] = std::move(eigenvalues);
    out["eigenvectors_Hc"] = std::move(vectors);
    out["kernel_index"] = spec.kernel_index;
    out["degeneracy_groups"] = spec.degeneracy_groups;
    return out;
}

std::string curves_csv(const VariationReport& report) {
    std::ostringstream os;
    os << "t,curve_id,lambda,lambda_dot_fd,variation_rhs,residual,min_gap,degenerate_flag\n";
    for (const auto& r : report.rows) {
        os << format_double(r.t) << ',' << r.curve_id << ',' << format_double(r.lambda) << ','
           << format_double(r.lambda_dot_fd) << ',' << format_double(r.rhs) << ','
           << format_double(r.residual) << ',' << format_double(r.min_gap) << ','
           << (r.degenerate ? 1 : 0) << '\n';
    }
    return os.str();
}

Json report_json(const VariationReport& report, double residual_threshold) {
    const bool pass = report.evaluated > 0 && report.max_relative_residual <= residual_threshold;
    return Json{{"pass", pass},
                {"residual_threshold", residual_threshold},
                {"max_relative_residual", report.max_relative_residual},
                {"max_residual", report.max_residual},
                {"max_endpoint_relative_residual", report.max_endpoint_relative_residual},
                {"max_form_discrepancy", report.max_form_discrepancy},
                {"max_mean_value", report.max_mean_value},
                {"max_normalization_defect", report.max_normalization_defect},
                {"evaluated_samples", report.evaluated},
                {"skipped_degenerate_samples", report.skipped_degenerate}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, "malformed JSON in " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << text;
    if (!out) fail(ErrorKind::InvalidInput, "write failed for " + path);
}

} // namespace ncflow
