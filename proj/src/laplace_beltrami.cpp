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

#include "ncflow/laplace_beltrami.hpp"

#include <cmath>

namespace ncflow {

namespace {

void require_dims(const TorusGeometry& g, const WeightedSpace& w, const char* what) {
    if (g.n() != w.n()) {
        fail(ErrorKind::InvalidInput, std::string(what) + ": metric dimension " +
                                          std::to_string(w.n()) + " does not match geometry " +
                                          std::to_string(g.n()));
    }
}

void require_operand(const WeightedSpace& w, const CMatrix& a, const char* what) {
    if (a.rows() != w.n() || a.cols() != w.n()) {
        fail(ErrorKind::InvalidInput, std::string(what) + ": operand shape does not match metric");
    }
}

} // namespace

WeightedSpace make_weighted_space(const Metric& c, double floor) {
    const HermitianEig eig = hermitian_eig(c.c);
    if (!(eig.eigenvalues(0) > floor)) {
        fail(ErrorKind::MetricDegenerate, "metric has non-positive spectrum");
    }
    WeightedSpace w;
    w.metric = {c.c, eig.eigenvalues(0)};
    w.sqrt = matrix_function(eig, [](double lam) { return std::sqrt(lam); });
    w.inv_sqrt = matrix_function(eig, [](double lam) { return 1.0 / std::sqrt(lam); });
    w.inv = matrix_function(eig, [](double lam) { return 1.0 / lam; });
    return w;
}

Complex inner_product_c(const Metric& c, const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "inner_product_c");
    require_same_shape(c.c, a, "inner_product_c");
    return (c.c * a.adjoint() * b).trace();
}

Complex weighted_trace(const Metric& c, const CMatrix& a) {
    require_same_shape(c.c, a, "weighted_trace");
    return (c.c * a).trace();
}

CMatrix lb_apply(const TorusGeometry& g, const WeightedSpace& w, const CMatrix& a) {
    require_dims(g, w, "lb_apply");
    return laplacian_apply(g, a) * w.inv;
}

CMatrix unitary_Uc_apply(const WeightedSpace& w, const CMatrix& a) {
    require_operand(w, a, "unitary_Uc_apply");
    return a * w.sqrt;
}

CMatrix unitary_Uc_inverse(const WeightedSpace& w, const CMatrix& abar) {
    require_operand(w, abar, "unitary_Uc_inverse");
    return abar * w.inv_sqrt;
}

Superoperator lb_conjugated_superop(const TorusGeometry& g, const WeightedSpace& w) {
    require_dims(g, w, "lb_conjugated_superop");
    return superop_from_map(g.n(), [&](const CMatrix& a) -> CMatrix {
        return laplacian_apply(g, a * w.inv_sqrt) * w.inv_sqrt;
    });
}

Superoperator rejected_lb_conjugated_superop(const TorusGeometry& g, const WeightedSpace& w) {
    require_dims(g, w, "rejected_lb_conjugated_superop");
    return superop_from_map(g.n(), [&](const CMatrix& abar) -> CMatrix {
        const CMatrix a = abar * w.inv_sqrt;
        return (w.inv * laplacian_apply(g, a)) * w.sqrt;
    });
}

double relative_non_hermiticity(const Superoperator& op) {
    const double norm = op.matrix.norm();
    if (norm == 0.0) return 0.0;
    return hermiticity_defect(op.matrix) / norm;
}

SpectralData lb_spectrum(const TorusGeometry& g, const WeightedSpace& w) {
    const Superoperator op = lb_conjugated_superop(g, w);
    const HermitianEig eig = hermitian_eig(hermitian_part(op.matrix));
    const Eigen::Index n = g.n();
    const Eigen::Index dim = n * n;

    SpectralData out;
    out.eigenvalues = eig.eigenvalues;
    out.operator_norm = std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(dim - 1)));
    out.eigvecs_H.reserve(dim);
    out.eigvecs_Hc.reserve(dim);

    for (Eigen::Index i = 0; i < dim; ++i) {
        CVector col = eig.eigenvectors.col(i);
        Eigen::Index pivot = 0;
        col.cwiseAbs().maxCoeff(&pivot);
        const Complex p = col(pivot);
        col *= std::conj(p) / std::abs(p);
        col(pivot) = Complex(std::abs(col(pivot)), 0.0);
        col.normalize();

        CMatrix abar = unflatten(col, n);
        CMatrix a = abar * w.inv_sqrt;
        const double norm_c = std::sqrt(std::max(inner_product_c(w.metric, a, a).real(), 0.0));
        a /= norm_c;
        out.eigvecs_H.push_back(std::move(abar));
        out.eigvecs_Hc.push_back(std::move(a));
    }

    // The kernel is one-dimensional and spanned by c^{1/2} in H; pick the
    // eigenvector with the largest overlap rather than assuming index 0.
    const CMatrix kernel_dir = w.sqrt / w.sqrt.norm();
    double best = -1.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double ov = std::abs(hs_inner(kernel_dir, out.eigvecs_H[i]));
        if (ov > best) {
            best = ov;
            out.kernel_index = static_cast<int>(i);
        }
    }

    const double threshold = kDegeneracyThreshold * std::max(out.operator_norm, 1.0);
    std::vector<int> group{0};
    for (Eigen::Index i = 1; i < dim; ++i) {
        if (eig.eigenvalues(i) - eig.eigenvalues(i - 1) < threshold) {
            group.push_back(static_cast<int>(i));
        } else {
            out.degeneracy_groups.push_back(group);
            group = {static_cast<int>(i)};
        }
    }
    out.degeneracy_groups.push_back(group);
    return out;
}

double rayleigh_quotient(const TorusGeometry& g, const Metric& c, const CMatrix& a) {
    const Complex num = hs_inner(a, laplacian_apply(g, a));
    const Complex den = inner_product_c(c, a, a);
    return num.real() / den.real();
}

} // namespace ncflow
