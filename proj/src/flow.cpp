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

#include "ncflow/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace ncflow {

namespace {

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

// Dormand-Prince 5(4) tableau.
constexpr int kStages = 7;
constexpr std::array<std::array<double, 6>, kStages> kA{{
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
constexpr std::array<double, kStages> kB5{35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                                          -2187.0 / 6784, 11.0 / 84, 0};
constexpr std::array<double, kStages> kB4{5179.0 / 57600,    0,           7571.0 / 16695,
                                          393.0 / 640,       -92097.0 / 339200,
                                          187.0 / 2100,      1.0 / 40};

CMatrix rhs_of(const TorusGeometry& g, const CMatrix& c, double floor) {
    const HermitianEig eig = hermitian_eig(c);
    if (eig.eigenvalues(0) <= floor) {
        fail(ErrorKind::MetricDegenerate,
             "metric eigenvalue " + fmt_double(eig.eigenvalues(0)) +
                 " at or below positivity floor " + fmt_double(floor));
    }
    const CMatrix log_c = matrix_function(eig, [](double lam) { return std::log(lam); });
    return hermitian_part(-laplacian_apply(g, log_c));
}

struct Attempt {
    CMatrix next;
    double error = 0.0;
};

// A stage that leaves P raises MetricDegenerate; the caller treats that as a
// rejected step.
Attempt dopri_attempt(const TorusGeometry& g, const CMatrix& c, double h, double floor) {
    std::array<CMatrix, kStages> k;
    k[0] = rhs_of(g, c, floor);
    for (int s = 1; s < kStages; ++s) {
        CMatrix stage = c;
        for (int j = 0; j < s; ++j)
            if (kA[s][j] != 0.0) stage += (h * kA[s][j]) * k[j];
        k[s] = rhs_of(g, hermitian_part(stage), floor);
    }
    CMatrix y5 = c;
    CMatrix diff = CMatrix::Zero(c.rows(), c.cols());
    for (int s = 0; s < kStages; ++s) {
        if (kB5[s] != 0.0) y5 += (h * kB5[s]) * k[s];
        diff += (h * (kB5[s] - kB4[s])) * k[s];
    }
    return {hermitian_part(y5), diff.norm()};
}

} // namespace

Metric make_metric(const CMatrix& c, double floor) {
    require_square(c, "metric");
    const HermitianEig eig = hermitian_eig(c);
    if (!(eig.eigenvalues(0) > floor)) {
        fail(ErrorKind::MetricDegenerate,
             "metric is not positive definite: smallest eigenvalue " +
                 fmt_double(eig.eigenvalues(0)));
    }
    return {hermitian_part(c), eig.eigenvalues(0)};
}

Metric diag_metric(const std::vector<double>& values) {
    if (values.empty()) fail(ErrorKind::InvalidInput, "diag metric needs at least one entry");
    CMatrix c = CMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                              static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) c(i, i) = values[i];
    return make_metric(c);
}

Metric random_metric(int n, std::uint64_t seed, double scale) {
    if (n < 1) fail(ErrorKind::InvalidInput, "random metric needs n >= 1");
    if (!(scale >= 0.0) || !std::isfinite(scale)) {
        fail(ErrorKind::InvalidInput, "random metric scale must be finite and >= 0");
    }
    std::mt19937_64 rng(seed);
    const CMatrix h = random_hermitian(n, rng, scale);
    CMatrix c = matrix_function(h, [](double lam) { return std::exp(lam); });
    c *= static_cast<double>(n) / c.trace().real();
    return make_metric(c);
}

void validate(const FlowConfig& cfg) {
    auto bad = [](const std::string& what) { fail(ErrorKind::InvalidInput, "flow config: " + what); };
    if (!std::isfinite(cfg.t0) || !std::isfinite(cfg.t1)) bad("times must be finite");
    if (cfg.t1 < cfg.t0) bad("t1 must be >= t0 (the flow runs forward only)");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) bad("tolerances must be positive");
    if (!(cfg.min_step > 0.0) || !(cfg.max_step >= cfg.min_step)) {
        bad("need 0 < min_step <= max_step");
    }
    if (!(cfg.initial_step > 0.0)) bad("initial_step must be positive");
    if (!(cfg.sample_stride > 0.0)) bad("sample_stride must be positive");
    if (!(cfg.positivity_floor >= 0.0)) bad("positivity_floor must be >= 0");
}

CMatrix ricci_rhs(const TorusGeometry& g, const Metric& c, double floor) {
    if (c.n() != g.n()) {
        fail(ErrorKind::InvalidInput, "ricci_rhs: metric dimension does not match geometry");
    }
    return rhs_of(g, c.c, floor);
}

StepResult flow_step(const TorusGeometry& g, const Metric& c, double t, double h,
                     const FlowConfig& config) {
    if (c.n() != g.n()) {
        fail(ErrorKind::InvalidInput, "flow_step: metric dimension does not match geometry");
    }
    if (!(h > 0.0) || h > config.max_step * (1.0 + 1e-12)) {
        fail(ErrorKind::InvalidInput, "flow_step: step " + fmt_double(h) +
                                          " outside (0, max_step]");
    }
    StepResult result;
    for (;;) {
        Attempt attempt;
        bool stage_left_domain = false;
        try {
            attempt = dopri_attempt(g, c.c, h, config.positivity_floor);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MetricDegenerate) throw;
            stage_left_domain = true;
        }
        result.rhs_evaluations += kStages;

        const double scale = std::max(c.c.norm(), stage_left_domain ? 0.0 : attempt.next.norm());
        const double tol = config.abs_tol + config.rel_tol * scale;
        if (!stage_left_domain && std::isfinite(attempt.error) && attempt.error <= tol) {
            const HermitianEig eig = hermitian_eig(attempt.next);
            if (!(eig.eigenvalues(0) > config.positivity_floor)) {
                fail(ErrorKind::PositivityLost,
                     "accepted step from t = " + fmt_double(t) + " with h = " + fmt_double(h) +
                         " produced smallest eigenvalue " + fmt_double(eig.eigenvalues(0)) +
                         "; tighten tolerances");
            }
            result.next = {attempt.next, eig.eigenvalues(0)};
            result.h_used = h;
            result.error_estimate = attempt.error;
            const double factor =
                attempt.error == 0.0 ? 5.0
                                     : std::clamp(0.9 * std::pow(tol / attempt.error, 0.2), 0.2, 5.0);
            result.h_next = std::clamp(h * factor, config.min_step, config.max_step);
            return result;
        }
        h *= 0.5;
        ++result.rejections;
        if (h < config.min_step) {
            fail(ErrorKind::StepUnderflow, "step size fell below min_step " +
                                               fmt_double(config.min_step) + " at t = " +
                                               fmt_double(t));
        }
    }
}

SampleDiagnostics diagnose(const Metric& c, double flat_scale) {
    const HermitianEig eig = hermitian_eig(c.c);
    SampleDiagnostics d;
    d.trace = c.c.trace().real();
    d.min_eigenvalue = eig.eigenvalues(0);
    d.det = 1.0;
    d.log_det = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        d.det *= eig.eigenvalues(i);
        d.log_det += std::log(eig.eigenvalues(i));
    }
    d.dist_to_flat = (c.c - flat_scale * CMatrix::Identity(c.n(), c.n())).norm();
    return d;
}

FlowTrajectory integrate(const TorusGeometry& g, const Metric& c0, const FlowConfig& config) {
    validate(config);
    if (c0.n() != g.n()) {
        fail(ErrorKind::InvalidInput, "integrate: metric dimension does not match geometry");
    }
    if (!(c0.min_eigenvalue > config.positivity_floor)) {
        fail(ErrorKind::MetricDegenerate, "integrate: initial metric below positivity floor");
    }

    FlowTrajectory traj;
    traj.params = g.params;
    traj.config = config;
    const double flat_scale = c0.c.trace().real() / static_cast<double>(c0.n());
    traj.samples.push_back({config.t0, c0, diagnose(c0, flat_scale)});

    // Sample grid t0 + k*stride, closed by t1 when the grid does not land on it.
    const double span = config.t1 - config.t0;
    const double landing_eps = 1e-12 * std::max(1.0, std::abs(config.t1));
    std::vector<double> grid;
    for (long k = 1;; ++k) {
        const double tk = config.t0 + static_cast<double>(k) * config.sample_stride;
        if (tk >= config.t1 - landing_eps) break;
        grid.push_back(tk);
    }
    if (span > 0.0) grid.push_back(config.t1);

    Metric c = c0;
    double t = config.t0;
    double h = std::min(config.initial_step, config.max_step);
    auto& st = traj.stats;
    st.smallest_step = std::numeric_limits<double>::infinity();
    for (double target : grid) {
        while (t < target) {
            const double remaining = target - t;
            const bool lands = h >= remaining - landing_eps;
            const double h_try = lands ? remaining : h;
            StepResult step;
            try {
                step = flow_step(g, c, t, h_try, config);
            } catch (const Error& e) {
                fail(e.kind(), std::string(e.what()) + " [integrating at t = " + fmt_double(t) + "]");
            }
            st.accepted_steps += 1;
            st.rejected_steps += step.rejections;
            st.rhs_evaluations += step.rhs_evaluations;
            st.smallest_step = std::min(st.smallest_step, step.h_used);
            st.largest_step = std::max(st.largest_step, step.h_used);
            c = std::move(step.next);
            const bool reached = lands && step.rejections == 0;
            t = reached ? target : t + step.h_used;
            if (!reached && target - t <= landing_eps) t = target;
            h = step.h_next;
        }
        traj.samples.push_back({target, c, diagnose(c, flat_scale)});
    }
    if (!std::isfinite(st.smallest_step)) st.smallest_step = 0.0;
    return traj;
}

} // namespace ncflow
