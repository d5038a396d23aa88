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

#ifndef NCFLOW_LAPLACE_BELTRAMI_HPP
#define NCFLOW_LAPLACE_BELTRAMI_HPP

/*
 *  Curved Laplacian for a metric c.
 *
 *    H_c        M_n with <a, b>_c = tr(c a^* b)
 *    lb         a -> (Lap a) c^{-1}, self-adjoint and positive on H_c
 *    U_c        H_c -> H, a -> a c^{1/2}, unitary
 *    conjugated U_c lb U_c^*: a -> Lap(a c^{-1/2}) c^{-1/2}, Hermitian on H
 *
 *  Spectra are computed from the conjugated form and mapped back to H_c.
 */

#include <vector>

#include "ncflow/flow.hpp"
#include "ncflow/linalg.hpp"
#include "ncflow/torus.hpp"

namespace ncflow {

/// Metric together with its principal square root and inverses.
struct WeightedSpace {
    Metric metric;
    CMatrix sqrt;
    CMatrix inv_sqrt;
    CMatrix inv;

    Eigen::Index n() const { return metric.n(); }
};

WeightedSpace make_weighted_space(const Metric& c, double floor = kDefaultPositivityFloor);

// tr(c a^* b)
Complex inner_product_c(const Metric& c, const CMatrix& a, const CMatrix& b);

// tr(c a)
Complex weighted_trace(const Metric& c, const CMatrix& a);

CMatrix lb_apply(const TorusGeometry& g, const WeightedSpace& w, const CMatrix& a);

CMatrix unitary_Uc_apply(const WeightedSpace& w, const CMatrix& a);
CMatrix unitary_Uc_inverse(const WeightedSpace& w, const CMatrix& abar);

Superoperator lb_conjugated_superop(const TorusGeometry& g, const WeightedSpace& w);

/// The left-multiplied alternative a -> c^{-1} (Lap a), carried to H by U_c.
/// It is not self-adjoint on H_c in general; kept as a negative control.
Superoperator rejected_lb_conjugated_superop(const TorusGeometry& g, const WeightedSpace& w);

/// |M - M^*| / |M| in the Frobenius norm (0 for the zero matrix).
double relative_non_hermiticity(const Superoperator& op);

// Eigenvalues closer than this multiple of |conjugated op| are grouped.
inline constexpr double kDegeneracyThreshold = 1e-8;

struct SpectralData {
    RVector eigenvalues;                 // ascending, length n^2
    std::vector<CMatrix> eigvecs_H;      // orthonormal in <.,.>
    std::vector<CMatrix> eigvecs_Hc;     // a = abar c^{-1/2}, unit norm in <.,.>_c
    std::vector<std::vector<int>> degeneracy_groups;
    double operator_norm = 0.0;          // largest eigenvalue
    int kernel_index = 0;                // the eigenpair whose vector is prop. to I

    std::size_t size() const { return eigvecs_H.size(); }
};

/// Full eigendecomposition. Each H-eigenvector is phased so that its
/// largest-magnitude entry is real positive, which makes the kernel vector
/// exactly I / sqrt(tr c) in H_c.
SpectralData lb_spectrum(const TorusGeometry& g, const WeightedSpace& w);

// tr(a^* Lap a) / tr(c a^* a)
double rayleigh_quotient(const TorusGeometry& g, const Metric& c, const CMatrix& a);

} // namespace ncflow

#endif
