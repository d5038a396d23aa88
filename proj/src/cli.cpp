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

#include "ncflow/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>

#include "ncflow/laplace_beltrami.hpp"

namespace ncflow {

namespace {

double parse_number(std::string_view text, const std::string& context) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        fail(ErrorKind::InvalidInput, context + ": cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.emplace_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

void check_formats(const std::vector<std::string>& formats) {
    for (const auto& f : formats) {
        if (f != "csv" && f != "json") {
            fail(ErrorKind::InvalidInput, "unknown output format '" + f + "' (expected csv, json)");
        }
    }
}

bool wants(const RunConfig& cfg, const char* format) {
    return std::find(cfg.format.begin(), cfg.format.end(), format) != cfg.format.end();
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(ErrorKind::InvalidInput, "cannot create output directory " + cfg.out);
    return dir;
}

void write_json(const std::filesystem::path& path, const Json& j) {
    write_text_file(path.string(), j.dump(2) + "\n");
}

// Shared front half of simulate/track: validated geometry, metric, trajectory.
struct Run {
    TorusGeometry geometry;
    Metric c0;
    FlowTrajectory trajectory;
};

Run run_flow(const RunConfig& cfg) {
    validate(TorusParams{cfg.n, cfg.m});
    validate(cfg.flow);
    check_formats(cfg.format);
    Run run;
    run.geometry = build_torus({cfg.n, cfg.m});
    run.c0 = parse_initial_metric(cfg.initial, cfg.n, cfg.seed);
    run.trajectory = integrate(run.geometry, run.c0, cfg.flow);
    return run;
}

// Largest admissible drop in log det between samples: roundoff only.
constexpr double kLogDetSlack = 1e-12;

Json flow_summary(const FlowTrajectory& traj) {
    const auto& samples = traj.samples;
    const double tr0 = samples.front().diagnostics.trace;
    double drift = 0.0;
    double min_increment = std::numeric_limits<double>::infinity();
    double min_eig = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto& d = samples[k].diagnostics;
        drift = std::max(drift, std::abs(d.trace - tr0) / std::abs(tr0));
        min_eig = std::min(min_eig, d.min_eigenvalue);
        if (k > 0) min_increment = std::min(min_increment, d.log_det - samples[k - 1].diagnostics.log_det);
    }
    if (!std::isfinite(min_increment)) min_increment = 0.0;
    return Json{{"n", traj.params.n},
                {"m", traj.params.m},
                {"samples", samples.size()},
                {"t_final", samples.back().t},
                {"trace_drift", drift},
                {"det_non_decreasing", min_increment >= -kLogDetSlack},
                {"min_log_det_increment", min_increment},
                {"min_eigenvalue", min_eig},
                {"final_dist_to_flat", samples.back().diagnostics.dist_to_flat},
                {"accepted_steps", traj.stats.accepted_steps},
                {"rejected_steps", traj.stats.rejected_steps}};
}

struct CheckList {
    Json items = Json::array();
    bool all_pass = true;

    // measured <= tolerance passes; errors during evaluation fail the check.
    void bound(const std::string& name, double tolerance, const std::function<double()>& measure) {
        double value = std::numeric_limits<double>::infinity();
        std::string error;
        try {
            value = measure();
        } catch (const Error& e) {
            error = e.what();
        }
        const bool pass = error.empty() && value <= tolerance;
        push(name, tolerance, value, pass, error);
    }

    void equals(const std::string& name, int expected, const std::function<int()>& measure) {
        double value = std::numeric_limits<double>::quiet_NaN();
        std::string error;
        try {
            value = measure();
        } catch (const Error& e) {
            error = e.what();
        }
        push(name, expected, value, error.empty() && value == expected, error);
    }

    void push(const std::string& name, double tolerance, double value, bool pass,
              const std::string& error) {
        Json item{{"check", name}, {"tolerance", tolerance}, {"measured", value}, {"pass", pass}};
        if (!error.empty()) item["error"] = error;
        items.push_back(std::move(item));
        all_pass = all_pass && pass;
    }
};

void geometry_checks(const TorusGeometry& g, CheckList& checks) {
    const GeometryResiduals r = check_geometry(g);
    checks.bound("relation |vu - q uv|", 1e-12, [&] { return r.relation; });
    checks.bound("unitarity |u*u - I|", 1e-12, [&] { return r.u_unitary; });
    checks.bound("unitarity |v*v - I|", 1e-12, [&] { return r.v_unitary; });
    checks.bound("|exp(2 pi i x / n) - u|", 1e-11, [&] { return r.exp_x; });
    checks.bound("|exp(2 pi i y / n) - v|", 1e-11, [&] { return r.exp_y; });
    checks.equals("q primitive n-th root of unity", 1, [&] { return r.q_primitive ? 1 : 0; });
    checks.equals("commutant dimension", 1, [&] { return r.commutant_dim; });
}

void laplacian_checks(const TorusGeometry& g, CheckList& checks) {
    const Eigen::Index n = g.n();
    std::mt19937_64 rng(1000 + 31 * g.params.n + g.params.m);
    const Superoperator lap = laplacian_superop(g);
    const double norm = lap.matrix.norm();
    checks.bound("Laplacian |M - M*| / |M|", 1e-12, [&] { return hermiticity_defect(lap.matrix) / norm; });

    KernelInfo info;
    bool have_info = false;
    auto get_info = [&]() -> const KernelInfo& {
        if (!have_info) {
            info = kernel_info(lap);
            have_info = true;
        }
        return info;
    };
    checks.bound("Laplacian -min eigenvalue / |Lap|", 1e-12,
                 [&] { return -get_info().min_eigenvalue / get_info().norm; });
    checks.equals("Laplacian kernel dimension", 1, [&] { return get_info().dimension; });
    checks.bound("Laplacian 1e-6 / spectral gap", 1.0, [&] { return 1e-6 / get_info().gap; });
    checks.bound("kernel vector vs flattened I: 1 - overlap", 1e-10, [&] {
        const HermitianEig eig = hermitian_eig(lap.matrix);
        const CVector unit = flatten(CMatrix::Identity(n, n)) / std::sqrt(static_cast<double>(n));
        return 1.0 - std::abs(unit.dot(eig.eigenvectors.col(0)));
    });

    std::vector<CMatrix> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(random_cmatrix(n, n, rng));
    checks.bound("max |tr(Lap a)| / |a| (100 random a)", 1e-12, [&] {
        double worst = 0.0;
        for (const auto& a : samples) worst = std::max(worst, std::abs(laplacian_apply(g, a).trace()) / a.norm());
        return worst;
    });
    checks.bound("Leibniz residual, both derivations (relative)", 1e-12, [&] {
        double worst = 0.0;
        for (int i = 0; i + 1 < 20; i += 2) {
            const CMatrix& a = samples[i];
            const CMatrix& b = samples[i + 1];
            const double scale = a.norm() * b.norm() * (g.x.norm() + g.y.norm());
            const CMatrix r1 = derivation1(g, a * b) - derivation1(g, a) * b - a * derivation1(g, b);
            const CMatrix r2 = derivation2(g, a * b) - derivation2(g, a) * b - a * derivation2(g, b);
            worst = std::max({worst, r1.norm() / scale, r2.norm() / scale});
        }
        return worst;
    });
    checks.bound("|Lap(a)* - Lap(a*)| / (|Lap| |a|)", 1e-12, [&] {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const CMatrix& a = samples[i];
            const CMatrix lhs = laplacian_apply(g, a).adjoint();
            const CMatrix rhs = laplacian_apply(g, a.adjoint());
            worst = std::max(worst, (lhs - rhs).norm() / (norm * a.norm()));
        }
        return worst;
    });
}

void flow_checks(const TorusGeometry& g, CheckList& checks) {
    FlowConfig fc;
    fc.t1 = 1.0;
    fc.sample_stride = 0.1;
    const Metric c0 = random_metric(g.params.n, 7, 0.5);
    FlowTrajectory traj;
    bool ok = true;
    std::string err;
    try {
        traj = integrate(g, c0, fc);
    } catch (const Error& e) {
        ok = false;
        err = e.what();
    }
    if (!ok) {
        checks.push("flow integration", 0.0, std::numeric_limits<double>::infinity(), false, err);
        return;
    }
    const Json s = flow_summary(traj);
    checks.bound("flow relative trace drift", 1e-9, [&] { return s["trace_drift"].get<double>(); });
    checks.bound("flow -min log det increment", kLogDetSlack,
                 [&] { return -s["min_log_det_increment"].get<double>(); });
    checks.bound("flow -min eigenvalue", 0.0, [&] { return -s["min_eigenvalue"].get<double>(); });
}

void laplace_beltrami_checks(const TorusGeometry& g, CheckList& checks) {
    const Eigen::Index n = g.n();
    const Metric c = random_metric(g.params.n, 11, 0.5);
    const WeightedSpace w = make_weighted_space(c);
    const Superoperator op = lb_conjugated_superop(g, w);
    checks.bound("conjugated LB |M - M*| / |M|", 1e-11, [&] { return relative_non_hermiticity(op); });
    const SpectralData spec = lb_spectrum(g, w);
    checks.bound("conjugated LB -min eigenvalue / |op|", 1e-10,
                 [&] { return -spec.eigenvalues(0) / spec.operator_norm; });
    checks.bound("U_c inner product defect (relative)", 1e-11, [&] {
        std::mt19937_64 rng(29);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            const CMatrix a = random_cmatrix(n, n, rng);
            const CMatrix b = random_cmatrix(n, n, rng);
            const CMatrix ua = unitary_Uc_apply(w, a);
            const CMatrix ub = unitary_Uc_apply(w, b);
            worst = std::max(worst, std::abs(hs_inner(ua, ub) - inner_product_c(c, a, b)) / (ua.norm() * ub.norm()));
        }
        return worst;
    });
    checks.bound("Rayleigh identity (relative)", 1e-9, [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            const double lam = spec.eigenvalues(static_cast<Eigen::Index>(i));
            const double rq = rayleigh_quotient(g, c, spec.eigvecs_Hc[i]);
            worst = std::max(worst, std::abs(rq - lam) / std::max(1.0, std::abs(lam)));
        }
        return worst;
    });
    checks.bound("mean zero |tr(c a)| for non-kernel eigenvectors", 1e-10, [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            if (static_cast<int>(i) == spec.kernel_index) continue;
            worst = std::max(worst, std::abs(weighted_trace(c, spec.eigvecs_Hc[i])) /
                                        (c.c.norm() * spec.eigvecs_Hc[i].norm()));
        }
        return worst;
    });
    checks.equals("LB kernel dimension", 1, [&] {
        int dim = 0;
        for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
            if (std::abs(spec.eigenvalues(i)) <= kKernelThreshold * spec.operator_norm) ++dim;
        return dim;
    });
}

template <class T>
void read_key(const Json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

} // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::PositivityLost:
    case ErrorKind::StepUnderflow:
        return kExitNumerical;
    default:
        return kExitInvalidInput;
    }
}

Json error_json(const Error& e) {
    return Json{{"error", std::string(to_string(e.kind()))},
                {"message", e.what()},
                {"exit_code", exit_code_for(e.kind())}};
}

Json to_json(const RunConfig& cfg) {
    return Json{{"n", cfg.n},
                {"m", cfg.m},
                {"initial", cfg.initial},
                {"seed", cfg.seed},
                {"t0", cfg.flow.t0},
                {"t1", cfg.flow.t1},
                {"rel_tol", cfg.flow.rel_tol},
                {"abs_tol", cfg.flow.abs_tol},
                {"max_step", cfg.flow.max_step},
                {"min_step", cfg.flow.min_step},
                {"initial_step", cfg.flow.initial_step},
                {"stride", cfg.flow.sample_stride},
                {"positivity_floor", cfg.flow.positivity_floor},
                {"out", cfg.out},
                {"format", cfg.format},
                {"time", cfg.time},
                {"overlap_min", cfg.tracking.overlap_min},
                {"gap_threshold", cfg.tracking.gap_threshold},
                {"fd_stride", cfg.fd_stride},
                {"residual_threshold", cfg.residual_threshold},
                {"n_max", cfg.n_max},
                {"geometry", cfg.geometry}};
}

RunConfig run_config_from_json(const Json& j) {
    if (!j.is_object()) fail(ErrorKind::InvalidInput, "config must be a JSON object");
    static const std::set<std::string> known{
        "n",        "m",         "initial",      "seed",         "t0",
        "t1",       "rel_tol",   "abs_tol",      "max_step",     "min_step",
        "initial_step", "stride", "positivity_floor", "out",     "format",
        "time",     "overlap_min", "gap_threshold", "fd_stride", "residual_threshold",
        "n_max",    "geometry"};
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) fail(ErrorKind::InvalidInput, "unknown config key '" + item.key() + "'");
    }
    RunConfig cfg;
    try {
        read_key(j, "n", cfg.n);
        read_key(j, "m", cfg.m);
        read_key(j, "initial", cfg.initial);
        read_key(j, "seed", cfg.seed);
        read_key(j, "t0", cfg.flow.t0);
        read_key(j, "t1", cfg.flow.t1);
        read_key(j, "rel_tol", cfg.flow.rel_tol);
        read_key(j, "abs_tol", cfg.flow.abs_tol);
        read_key(j, "max_step", cfg.flow.max_step);
        read_key(j, "min_step", cfg.flow.min_step);
        read_key(j, "initial_step", cfg.flow.initial_step);
        read_key(j, "stride", cfg.flow.sample_stride);
        read_key(j, "positivity_floor", cfg.flow.positivity_floor);
        read_key(j, "out", cfg.out);
        read_key(j, "format", cfg.format);
        read_key(j, "time", cfg.time);
        read_key(j, "overlap_min", cfg.tracking.overlap_min);
        read_key(j, "gap_threshold", cfg.tracking.gap_threshold);
        read_key(j, "fd_stride", cfg.fd_stride);
        read_key(j, "residual_threshold", cfg.residual_threshold);
        read_key(j, "n_max", cfg.n_max);
        read_key(j, "geometry", cfg.geometry);
    } catch (const Json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("config: ") + e.what());
    }
    return cfg;
}

Metric parse_initial_metric(const std::string& spec, int n, std::uint64_t default_seed) {
    auto check_dim = [n](const Metric& c) {
        if (c.n() != n) {
            fail(ErrorKind::InvalidInput, "initial metric is " + std::to_string(c.n()) + "x" +
                                              std::to_string(c.n()) + ", expected n = " +
                                              std::to_string(n));
        }
        return c;
    };
    if (spec.rfind("diag:", 0) == 0) {
        std::vector<double> values;
        for (const auto& part : split(std::string_view(spec).substr(5), ','))
            values.push_back(parse_number(part, "diag metric"));
        return check_dim(diag_metric(values));
    }
    if (spec == "random" || spec.rfind("random:", 0) == 0) {
        std::uint64_t seed = default_seed;
        double scale = 0.5;
        if (spec.size() > 7) {
            for (const auto& part : split(std::string_view(spec).substr(7), ',')) {
                const auto eq = part.find('=');
                const std::string key = part.substr(0, eq);
                if (eq == std::string::npos) fail(ErrorKind::InvalidInput, "random metric: expected key=value, got '" + part + "'");
                const std::string value = part.substr(eq + 1);
                if (key == "seed") {
                    const auto res = std::from_chars(value.data(), value.data() + value.size(), seed);
                    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
                        fail(ErrorKind::InvalidInput, "random metric: bad seed '" + value + "'");
                    }
                } else if (key == "scale") {
                    scale = parse_number(value, "random metric scale");
                } else {
                    fail(ErrorKind::InvalidInput, "random metric: unknown key '" + key + "'");
                }
            }
        }
        return random_metric(n, seed, scale);
    }
    return check_dim(make_metric(cmatrix_from_json(read_json_file(spec))));
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    const Run run = run_flow(cfg);
    CommandResult result;
    result.summary = flow_summary(run.trajectory);

    const auto dir = prepare_out(cfg);
    if (wants(cfg, "csv")) write_text_file((dir / "trajectory.csv").string(), trajectory_csv(run.trajectory));
    if (wants(cfg, "json")) write_json(dir / "trajectory.json", trajectory_json(run.trajectory));
    write_json(dir / "summary.json", result.summary);
    return result;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
    validate(TorusParams{cfg.n, cfg.m});
    check_formats(cfg.format);
    if (!std::isfinite(cfg.time) || cfg.time < cfg.flow.t0) {
        fail(ErrorKind::InvalidInput, "spectrum time must be >= t0");
    }
    const TorusGeometry g = build_torus({cfg.n, cfg.m});
    Metric c = parse_initial_metric(cfg.initial, cfg.n, cfg.seed);
    if (cfg.time > cfg.flow.t0) {
        FlowConfig fc = cfg.flow;
        fc.t1 = cfg.time;
        c = integrate(g, c, fc).samples.back().metric;
    }
    const SpectralData spec = lb_spectrum(g, make_weighted_space(c, cfg.flow.positivity_floor));

    CommandResult result;
    result.summary = spectrum_json(spec, cfg.time);
    const auto dir = prepare_out(cfg);
    write_json(dir / "spectrum.json", result.summary);
    return result;
}

CommandResult cmd_track(const RunConfig& cfg) {
    if (cfg.fd_stride < 1) fail(ErrorKind::InvalidInput, "fd_stride must be >= 1");
    const Run run = run_flow(cfg);
    const auto curves = track_spectrum(run.geometry, run.trajectory, cfg.tracking);
    const VariationReport report =
        first_variation_report(run.geometry, curves, run.trajectory, FdStepPolicy{cfg.fd_stride});

    CommandResult result;
    Json rep = report_json(report, cfg.residual_threshold);
    constexpr double form_tol = 1e-10;
    rep["form_tolerance"] = form_tol;
    const bool pass = rep["pass"].get<bool>() && report.max_form_discrepancy <= form_tol;
    rep["pass"] = pass;
    rep["flow"] = flow_summary(run.trajectory);
    result.summary = rep;
    result.exit_code = pass ? kExitOk : kExitAcceptance;

    const auto dir = prepare_out(cfg);
    if (wants(cfg, "csv")) write_text_file((dir / "curves.csv").string(), curves_csv(report));
    write_json(dir / "report.json", rep);
    return result;
}

CommandResult cmd_verify(const RunConfig& cfg) {
    Json cases = Json::array();
    bool all_pass = true;
    auto record = [&](const TorusParams& p, CheckList& checks) {
        all_pass = all_pass && checks.all_pass;
        cases.push_back(Json{{"n", p.n}, {"m", p.m}, {"pass", checks.all_pass}, {"checks", checks.items}});
    };

    if (!cfg.geometry.empty()) {
        const TorusGeometry g = geometry_from_json(read_json_file(cfg.geometry));
        CheckList checks;
        geometry_checks(g, checks);
        laplacian_checks(g, checks);
        record(g.params, checks);
    } else {
        if (cfg.n_max < 2) fail(ErrorKind::InvalidParams, "n_max must be >= 2");
        for (const TorusParams& p : valid_params(cfg.n_max)) {
            const TorusGeometry g = build_torus(p);
            CheckList checks;
            geometry_checks(g, checks);
            laplacian_checks(g, checks);
            flow_checks(g, checks);
            laplace_beltrami_checks(g, checks);
            record(p, checks);
        }
    }

    CommandResult result;
    result.summary = Json{{"pass", all_pass}, {"n_max", cfg.n_max}, {"cases", std::move(cases)}};
    if (!cfg.geometry.empty()) result.summary["geometry"] = cfg.geometry;
    result.exit_code = all_pass ? kExitOk : kExitAcceptance;
    const auto dir = prepare_out(cfg);
    write_json(dir / "verify.json", result.summary);
    return result;
}

} // namespace ncflow
