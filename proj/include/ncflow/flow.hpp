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

#ifndef NCFLOW_FLOW_HPP
#define NCFLOW_FLOW_HPP

#include <cstdint>
#include <vector>

#include "ncflow/linalg.hpp"
#include "ncflow/torus.hpp"

namespace ncflow {

inline constexpr double kDefaultPositivityFloor = 1e-12;

/// A noncommutative metric: Hermitian with strictly positive spectrum.
struct Metric {
    CMatrix c;
    double min_eigenvalue = 0.0;

    Eigen::Index n() const { return c.rows(); }
};

/// Validates, symmetrizes and caches the smallest eigenvalue. Throws
/// InvalidInput for non-Hermitian input and MetricDegenerate when the
/// smallest eigenvalue is <= floor.
Metric make_metric(const CMatrix& c, double floor = kDefaultPositivityFloor);

Metric diag_metric(const std::vector<double>& values);

/// exp(scale * h) for a seeded Gaussian Hermitian h, rescaled to trace n.
Metric random_metric(int n, std::uint64_t seed, double scale = 0.5);

struct FlowConfig {
    double t0 = 0.0;
    double t1 = 1.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 1.0;
    double min_step = 1e-12;
    double initial_step = 1e-3;
    double sample_stride = 0.1; // time between recorded samples
    double positivity_floor = kDefaultPositivityFloor;
};

void validate(const FlowConfig& config);

struct SampleDiagnostics {
    double trace = 0.0;
    double det = 0.0;
    double log_det = 0.0;
    double min_eigenvalue = 0.0;
    double dist_to_flat = 0.0; // |c - (tr(c0)/n) I|
};

struct FlowSample {
    double t = 0.0;
    Metric metric;
    SampleDiagnostics diagnostics;
};

struct IntegratorStats {
    long accepted_steps = 0;
    long rejected_steps = 0;
    long rhs_evaluations = 0;
    double smallest_step = 0.0;
    double largest_step = 0.0;
};

struct FlowTrajectory {
    TorusParams params;
    FlowConfig config;
    std::vector<FlowSample> samples; // strictly increasing t
    IntegratorStats stats;
};

/// Right-hand side of the flow, -Laplacian(log c). Traceless and Hermitian.
CMatrix ricci_rhs(const TorusGeometry& g, const Metric& c,
                  double floor = kDefaultPositivityFloor);

struct StepResult {
    Metric next;
    double h_used = 0.0;
    double error_estimate = 0.0; // Hilbert-Schmidt norm of the embedded difference
    double h_next = 0.0;         // controller proposal for the following step
    int rejections = 0;
    int rhs_evaluations = 0;
};

/// One accepted Dormand-Prince 5(4) step starting from h, halving on
/// rejection. The result is symmetrized and must remain positive.
StepResult flow_step(const TorusGeometry& g, const Metric& c, double t, double h,
                     const FlowConfig& config);

FlowTrajectory integrate(const TorusGeometry& g, const Metric& c0, const FlowConfig& config);

SampleDiagnostics diagnose(const Metric& c, double flat_scale);

} // namespace ncflow

#endif
