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

#include "ncflow/tracking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ncflow {

namespace {

CMatrix laplacian_of_log(const TorusGeometry& g, const Metric& c) {
    const CMatrix log_c = matrix_function(c.c, [](double lam) {
        return lam > 0.0 ? std::log(lam) : std::numeric_limits<double>::quiet_NaN();
    });
    return laplacian_apply(g, log_c);
}

double real_checked(Complex z, const char* what) {
    if (std::abs(z.imag()) > 1e-10 * std::max(1.0, std::abs(z.real()))) {
        fail(ErrorKind::InvalidInput, std::string(what) + ": value has a non-negligible imaginary part");
    }
    return z.real();
}

double rhs_from(double lambda, const CMatrix& a, const CMatrix& lap_log) {
    return lambda * real_checked((a.adjoint() * a * lap_log).trace(), "variation_rhs");
}

double rhs_weighted_from(double lambda, const Metric& c, const CMatrix& c_inv, const CMatrix& a,
                         const CMatrix& lap_log) {
    return lambda * real_checked(weighted_trace(c, a.adjoint() * a * (lap_log * c_inv)),
                                 "variation_rhs_weighted");
}

struct Stencil {
    int k0 = 0;
    std::array<double, 3> w{};
    std::array<int, 3> idx{};
};

// Second-order three-point derivative at t[k] from the nodes idx.
Stencil make_stencil(const std::vector<double>& t, int k, int i0, int i1, int i2) {
    const double x0 = t[i0] - t[k], x1 = t[i1] - t[k], x2 = t[i2] - t[k];
    // Derivative of the Lagrange interpolant at 0.
    Stencil s;
    s.k0 = k;
    s.idx = {i0, i1, i2};
    s.w[0] = (-(x1 + x2)) / ((x0 - x1) * (x0 - x2));
    s.w[1] = (-(x0 + x2)) / ((x1 - x0) * (x1 - x2));
    s.w[2] = (-(x0 + x1)) / ((x2 - x0) * (x2 - x1));
    return s;
}

} // namespace

std::vector<int> solve_assignment_max(const Eigen::MatrixXd& score) {
    const int n = static_cast<int>(score.rows());
    if (score.cols() != n) fail(ErrorKind::InvalidInput, "assignment: score matrix must be square");
    if (n == 0) return {};
    // Hungarian method on cost = max - score, 1-based potentials.
    const double top = score.maxCoeff();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = (top - score(i0 - 1, j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

EigenpairMatch match_eigenpairs(const SpectralData& prev, const SpectralData& cur,
                                double overlap_min) {
    const std::size_t dim = prev.size();
    if (cur.size() != dim || dim == 0) {
        fail(ErrorKind::InvalidInput, "match_eigenpairs: spectra have different dimensions");
    }
    if (prev.eigvecs_H[0].rows() != cur.eigvecs_H[0].rows()) {
        fail(ErrorKind::InvalidInput, "match_eigenpairs: eigenvector shapes differ");
    }
    Eigen::MatrixXcd gram(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            gram(i, j) = hs_inner(prev.eigvecs_H[i], cur.eigvecs_H[j]);
    const Eigen::MatrixXd score = gram.cwiseAbs2();

    EigenpairMatch m;
    m.permutation = solve_assignment_max(score);
    m.phases.resize(dim);
    m.overlaps.resize(dim);
    m.degenerate.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const Complex ov = gram(i, m.permutation[i]);
        const double mag = std::abs(ov);
        // conj(ov)/|ov| turns <prev, phase * cur> into |ov|.
        m.phases[i] = mag > 0.0 ? std::conj(ov) / mag : Complex(1.0);
        m.overlaps[i] = mag;
        m.degenerate[i] = mag < overlap_min;
    }
    return m;
}

std::vector<SpectralCurve> track_spectrum(const TorusGeometry& g, const FlowTrajectory& traj,
                                          const TrackingConfig& config) {
    if (traj.samples.empty()) return {};
    const std::size_t dim = static_cast<std::size_t>(g.n() * g.n());

    auto gaps_of = [](const RVector& lam) {
        std::vector<double> gaps(lam.size(), std::numeric_limits<double>::infinity());
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            if (i > 0) gaps[i] = std::min(gaps[i], lam(i) - lam(i - 1));
            if (i + 1 < lam.size()) gaps[i] = std::min(gaps[i], lam(i + 1) - lam(i));
        }
        return gaps;
    };

    std::vector<SpectralCurve> curves(dim);
    SpectralData by_curve; // eigenvectors ordered by curve id, already phased

    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const FlowSample& sample = traj.samples[k];
        const WeightedSpace w = make_weighted_space(sample.metric, traj.config.positivity_floor);
        SpectralData spec = lb_spectrum(g, w);
        const std::vector<double> gaps = gaps_of(spec.eigenvalues);
        const double gap_floor = config.gap_threshold * std::max(spec.operator_norm, 1.0);

        std::vector<int> index(dim);
        std::vector<Complex> phase(dim, Complex(1.0));
        std::vector<double> overlap(dim, 1.0);
        std::vector<bool> weak(dim, false);
        if (k == 0) {
            for (std::size_t i = 0; i < dim; ++i) {
                index[i] = static_cast<int>(i);
                curves[i].curve_id = static_cast<int>(i);
                curves[i].is_kernel = static_cast<int>(i) == spec.kernel_index;
            }
        } else {
            const EigenpairMatch m = match_eigenpairs(by_curve, spec, config.overlap_min);
            index = m.permutation;
            phase = m.phases;
            overlap = m.overlaps;
            weak = m.degenerate;
        }

        SpectralData next;
        next.eigenvalues.resize(dim);
        next.eigvecs_H.reserve(dim);
        next.eigvecs_Hc.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            const int j = index[i];
            CurveSample cs;
            cs.t = sample.t;
            cs.lambda = spec.eigenvalues(j);
            cs.abar = phase[i] * spec.eigvecs_H[j];
            cs.a = phase[i] * spec.eigvecs_Hc[j];
            cs.min_gap = gaps[j];
            cs.overlap = overlap[i];
            cs.degenerate = weak[i] || gaps[j] < gap_floor;
            next.eigenvalues(i) = cs.lambda;
            next.eigvecs_H.push_back(cs.abar);
            next.eigvecs_Hc.push_back(cs.a);
            curves[i].samples.push_back(std::move(cs));
        }
        by_curve = std::move(next);
    }
    return curves;
}

double variation_rhs(const TorusGeometry& g, const Metric& c, double lambda, const CMatrix& a) {
    require_same_shape(c.c, a, "variation_rhs");
    if (!(c.min_eigenvalue > 0.0)) fail(ErrorKind::MetricDegenerate, "variation_rhs: metric not positive");
    return rhs_from(lambda, a, laplacian_of_log(g, c));
}

double variation_rhs_weighted(const TorusGeometry& g, const Metric& c, double lambda,
                              const CMatrix& a) {
    require_same_shape(c.c, a, "variation_rhs_weighted");
    const WeightedSpace w = make_weighted_space(c);
    return rhs_weighted_from(lambda, c, w.inv, a, laplacian_of_log(g, c));
}

VariationReport first_variation_report(const TorusGeometry& g,
                                       const std::vector<SpectralCurve>& curves,
                                       const FlowTrajectory& traj, const FdStepPolicy& policy) {
    const int count = static_cast<int>(traj.samples.size());
    const int s = policy.stride;
    if (s < 1) fail(ErrorKind::InvalidInput, "finite-difference stride must be >= 1");
    if (count < 3 || count < 2 * s + 1) {
        fail(ErrorKind::InsufficientData,
             "first variation needs at least " + std::to_string(std::max(3, 2 * s + 1)) +
                 " samples, trajectory has " + std::to_string(count));
    }
    for (const auto& curve : curves) {
        if (static_cast<int>(curve.samples.size()) != count) {
            fail(ErrorKind::InvalidInput, "curve length does not match trajectory");
        }
    }

    std::vector<double> times(count);
    for (int k = 0; k < count; ++k) times[k] = traj.samples[k].t;

    VariationReport report;
    for (int k = 0; k < count; ++k) {
        const Metric& c = traj.samples[k].metric;
        const WeightedSpace w = make_weighted_space(c, traj.config.positivity_floor);
        const CMatrix lap_log = laplacian_of_log(g, c);

        Stencil st;
        bool interior = false;
        if (k - s >= 0 && k + s < count) {
            st = make_stencil(times, k, k - s, k, k + s);
            interior = true;
        } else if (k - s < 0) {
            st = make_stencil(times, k, k, k + s, k + 2 * s);
        } else {
            st = make_stencil(times, k, k - 2 * s, k - s, k);
        }

        for (const auto& curve : curves) {
            const CurveSample& cs = curve.samples[k];
            VariationRow row;
            row.curve_id = curve.curve_id;
            row.t = cs.t;
            row.lambda = cs.lambda;
            row.min_gap = cs.min_gap;
            row.interior = interior;
            row.lambda_dot_fd = 0.0;
            row.degenerate = false;
            for (int q = 0; q < 3; ++q) {
                const CurveSample& node = curve.samples[st.idx[q]];
                row.lambda_dot_fd += st.w[q] * node.lambda;
                row.degenerate = row.degenerate || node.degenerate;
            }
            // Matching continuity is judged on every sample between the stencil ends.
            const int lo = *std::min_element(st.idx.begin(), st.idx.end());
            const int hi = *std::max_element(st.idx.begin(), st.idx.end());
            for (int q = lo; q <= hi; ++q) row.degenerate = row.degenerate || curve.samples[q].degenerate;

            row.rhs = rhs_from(cs.lambda, cs.a, lap_log);
            row.rhs_weighted = rhs_weighted_from(cs.lambda, c, w.inv, cs.a, lap_log);
            row.residual = std::abs(row.lambda_dot_fd - row.rhs);
            row.relative_residual = row.residual / (1.0 + std::abs(row.lambda_dot_fd));
            row.mean_value = std::abs(weighted_trace(c, cs.a));

            report.max_form_discrepancy =
                std::max(report.max_form_discrepancy,
                         std::abs(row.rhs - row.rhs_weighted) / std::max(1.0, std::abs(row.rhs)));
            report.max_normalization_defect =
                std::max(report.max_normalization_defect,
                         std::abs(inner_product_c(c, cs.a, cs.a).real() - 1.0));
            if (!curve.is_kernel) {
                report.max_mean_value = std::max(report.max_mean_value, row.mean_value);
            }

            if (row.degenerate) {
                ++report.skipped_degenerate;
            } else if (interior) {
                ++report.evaluated;
                report.max_relative_residual = std::max(report.max_relative_residual, row.relative_residual);
                report.max_residual = std::max(report.max_residual, row.residual);
            } else {
                report.max_endpoint_relative_residual =
                    std::max(report.max_endpoint_relative_residual, row.relative_residual);
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

} // namespace ncflow
