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

#ifndef NCFLOW_TRACKING_HPP
#define NCFLOW_TRACKING_HPP

#include <vector>

#include "ncflow/flow.hpp"
#include "ncflow/laplace_beltrami.hpp"
#include "ncflow/torus.hpp"

namespace ncflow {

/// Solves the square assignment problem max sum_i score(i, perm[i]).
/// Returns perm with perm[row] = assigned column.
std::vector<int> solve_assignment_max(const Eigen::MatrixXd& score);

struct EigenpairMatch {
    std::vector<int> permutation;   // prev index i -> cur index permutation[i]
    std::vector<Complex> phases;    // multiply cur vector permutation[i] by phases[i]
    std::vector<double> overlaps;   // |<abar_prev_i, abar_cur_perm(i)>|
    std::vector<bool> degenerate;   // overlap below overlap_min
};

/// Matches eigenvectors of consecutive spectra by maximizing the total
/// squared overlap, then fixes phases so each matched overlap is real
/// positive.
EigenpairMatch match_eigenpairs(const SpectralData& prev, const SpectralData& cur,
                                double overlap_min);

struct TrackingConfig {
    double overlap_min = 0.9;
    // Relative to the conjugated operator norm; closer eigenvalues are flagged.
    double gap_threshold = kDegeneracyThreshold;
};

struct CurveSample {
    double t = 0.0;
    double lambda = 0.0;
    CMatrix a;            // in H_c, <a, a>_c = 1
    CMatrix abar;         // a c^{1/2}, unit norm in H
    double min_gap = 0.0; // distance to the nearest other eigenvalue
    double overlap = 1.0; // |<abar(t_prev), abar(t)>|, 1 at the first sample
    bool degenerate = false;
};

struct SpectralCurve {
    int curve_id = 0;      // ascending position at the first sample
    bool is_kernel = false;
    std::vector<CurveSample> samples;
};

/// Phase convention: the first sample of each curve has its largest entry of
/// abar real positive; later samples are phased to a real positive overlap
/// with their predecessor.
std::vector<SpectralCurve> track_spectrum(const TorusGeometry& g, const FlowTrajectory& traj,
                                          const TrackingConfig& config = {});

// lambda tr(a^* a Lap(log c))
double variation_rhs(const TorusGeometry& g, const Metric& c, double lambda, const CMatrix& a);

// lambda tr(c a^* a (Lap(log c)) c^{-1}), the weighted-trace form.
double variation_rhs_weighted(const TorusGeometry& g, const Metric& c, double lambda,
                              const CMatrix& a);

/// Finite-difference oracle spacing: derivatives use samples k - stride,
/// k, k + stride (one-sided second-order stencils at the ends).
struct FdStepPolicy {
    int stride = 1;
};

struct VariationRow {
    int curve_id = 0;
    double t = 0.0;
    double lambda = 0.0;
    double lambda_dot_fd = 0.0;
    double rhs = 0.0;
    double rhs_weighted = 0.0;
    double residual = 0.0;          // |fd - rhs|
    double relative_residual = 0.0; // residual / (1 + |fd|)
    double min_gap = 0.0;
    double mean_value = 0.0;        // |tr(c a)|
    bool degenerate = false;
    bool interior = false;
};

struct VariationReport {
    std::vector<VariationRow> rows; // ordered by (t, curve_id)
    double max_relative_residual = 0.0;   // interior, non-degenerate
    double max_residual = 0.0;            // interior, non-degenerate
    double max_endpoint_relative_residual = 0.0;
    double max_form_discrepancy = 0.0;    // |rhs - rhs_weighted| / max(1, |rhs|)
    double max_mean_value = 0.0;          // |tr(c a)| for non-kernel eigenvectors
    double max_normalization_defect = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped_degenerate = 0;
};

VariationReport first_variation_report(const TorusGeometry& g,
                                       const std::vector<SpectralCurve>& curves,
                                       const FlowTrajectory& traj,
                                       const FdStepPolicy& policy = {});

} // namespace ncflow

#endif
