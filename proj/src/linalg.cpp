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

#include "ncflow/linalg.hpp"

#include <Eigen/Eigenvalues>

namespace ncflow {

namespace {

std::string shape_of(const CMatrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

} // namespace

void require_square(const CMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        fail(ErrorKind::InvalidInput,
             std::string(what) + ": expected a non-empty square matrix, got " + shape_of(a));
    }
}

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        fail(ErrorKind::InvalidInput,
             std::string(what) + ": shape mismatch " + shape_of(a) + " vs " + shape_of(b));
    }
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
    require_same_shape(a, b, "hs_inner");
    // sum_jk conj(a_jk) b_jk == tr(a^* b)
    return a.conjugate().cwiseProduct(b).sum();
}

CMatrix commutator(const CMatrix& p, const CMatrix& a) {
    require_same_shape(p, a, "commutator");
    require_square(p, "commutator");
    return p * a - a * p;
}

HermitianEig hermitian_eig(const CMatrix& a) {
    require_square(a, "hermitian_eig");
    const double scale = a.norm();
    const double defect = hermiticity_defect(a);
    if (defect > kHermitianTol * scale) {
        std::ostringstream os;
        os.precision(6);
        os << "hermitian_eig: input not Hermitian (|a - a*| = " << defect
           << ", |a| = " << scale << ")";
        fail(ErrorKind::InvalidInput, os.str());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(a));
    if (solver.info() != Eigen::Success) {
        fail(ErrorKind::InvalidInput, "hermitian_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CVector flatten(const CMatrix& a) {
    const Eigen::Index n = a.rows();
    CVector v(n * a.cols());
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < a.cols(); ++k)
            v(j * a.cols() + k) = a(j, k);
    return v;
}

CMatrix unflatten(const CVector& v, Eigen::Index n) {
    if (n <= 0 || v.size() != n * n) {
        fail(ErrorKind::InvalidInput,
             "unflatten: vector of length " + std::to_string(v.size()) +
                 " is not n^2 for n = " + std::to_string(n));
    }
    CMatrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            a(j, k) = v(j * n + k);
    return a;
}

Superoperator superop_from_map(Eigen::Index n, const MatrixMap& map) {
    if (n <= 0) fail(ErrorKind::InvalidInput, "superop_from_map: n must be positive");
    const Eigen::Index dim = n * n;

    auto image = [&](const CMatrix& a) {
        CMatrix out = map(a);
        if (out.rows() != n || out.cols() != n) {
            fail(ErrorKind::InvalidInput,
                 "superop_from_map: map returned " + shape_of(out) + ", expected " +
                     std::to_string(n) + "x" + std::to_string(n));
        }
        return out;
    };

    {
        std::mt19937_64 rng(0x5eed'1ea7ULL);
        const CMatrix a = random_cmatrix(n, n, rng);
        const CMatrix b = random_cmatrix(n, n, rng);
        const Complex alpha(0.7, -1.3);
        const CMatrix lhs = image(alpha * a + b);
        const CMatrix rhs = alpha * image(a) + image(b);
        const double scale = lhs.norm() + rhs.norm() + 1.0;
        if ((lhs - rhs).norm() > 1e-9 * scale) {
            fail(ErrorKind::InvalidInput, "superop_from_map: map is not linear");
        }
    }

    Superoperator op;
    op.n = n;
    op.matrix = CMatrix::Zero(dim, dim);
    CMatrix unit = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            unit(j, k) = 1.0;
            op.matrix.col(j * n + k) = flatten(image(unit));
            unit(j, k) = 0.0;
        }
    }
    return op;
}

CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j)
        for (Eigen::Index k = 0; k < cols; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            a(j, k) = Complex(re, im);
        }
    return a;
}

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix h(n, n);
    const double off = scale / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        h(j, j) = scale * gauss(rng);
        for (Eigen::Index k = j + 1; k < n; ++k) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h(j, k) = Complex(off * re, off * im);
            h(k, j) = std::conj(h(j, k));
        }
    }
    return h;
}

} // namespace ncflow
