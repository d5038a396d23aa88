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

#ifndef NCFLOW_LINALG_HPP
#define NCFLOW_LINALG_HPP

/*
 *  Dense complex linear algebra on M_n.
 *
 *  Matrices are Eigen::MatrixXcd. Linear maps on M_n ("superoperators") are
 *  n^2 x n^2 matrices in the matrix-unit basis E_{jk}, enumerated row-major:
 *  E_{jk} has flat index j*n + k. With this convention the Hilbert-Schmidt
 *  inner product tr(a^* b) is the ordinary dot product of flattened vectors.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <sstream>
#include <type_traits>

#include <Eigen/Dense>

#include "ncflow/errors.hpp"

namespace ncflow {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Relative Hermiticity tolerance; below it input is silently symmetrized.
inline constexpr double kHermitianTol = 1e-10;

struct HermitianEig {
    RVector eigenvalues;  // ascending
    CMatrix eigenvectors; // unitary, columns are eigenvectors
};

inline double hs_norm(const CMatrix& a) { return a.norm(); }

inline Complex trace(const CMatrix& a) { return a.trace(); }

// <a, b> = tr(a^* b), conjugate-linear in a.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

CMatrix commutator(const CMatrix& p, const CMatrix& a);

inline CMatrix hermitian_part(const CMatrix& a) {
    return (a + a.adjoint()) * 0.5;
}

inline double hermiticity_defect(const CMatrix& a) {
    return (a - a.adjoint()).norm();
}

void require_square(const CMatrix& a, const char* what);
void require_same_shape(const CMatrix& a, const CMatrix& b, const char* what);

HermitianEig hermitian_eig(const CMatrix& a);

/// Applies f to the spectrum of a Hermitian matrix: V f(L) V^*.
/// f may be real- or complex-valued; any non-finite value of f is reported
/// as SpectrumOutOfDomain together with the eigenvalue that produced it.
template <class F>
CMatrix matrix_function(const HermitianEig& eig, F&& f) {
    const auto n = eig.eigenvalues.size();
    CVector fvals(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = eig.eigenvalues(i);
        const Complex val = Complex(f(lam));
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
            std::ostringstream os;
            os.precision(17);
            os << "function undefined at eigenvalue " << lam;
            fail(ErrorKind::SpectrumOutOfDomain, os.str());
        }
        fvals(i) = val;
    }
    CMatrix out = eig.eigenvectors * fvals.asDiagonal() * eig.eigenvectors.adjoint();
    if constexpr (std::is_floating_point_v<std::invoke_result_t<F&, double>>) {
        out = hermitian_part(out);
    }
    return out;
}

template <class F>
CMatrix matrix_function(const CMatrix& a, F&& f) {
    return matrix_function(hermitian_eig(a), std::forward<F>(f));
}

// Row-major flattening: vec(j*n + k) = a(j, k).
CVector flatten(const CMatrix& a);
CMatrix unflatten(const CVector& v, Eigen::Index n);

using MatrixMap = std::function<CMatrix(const CMatrix&)>;

struct Superoperator {
    Eigen::Index n = 0; // acts on n x n matrices; matrix is n^2 x n^2
    CMatrix matrix;

    CVector apply(const CVector& flat) const { return matrix * flat; }
    CMatrix apply(const CMatrix& a) const { return unflatten(matrix * flatten(a), n); }
};

/// Assembles the matrix of a linear map on M_n column by column from the
/// images of the matrix units. Linearity is spot-checked on a fixed-seed
/// random pair before assembly.
Superoperator superop_from_map(Eigen::Index n, const MatrixMap& map);

// Seeded generators shared by the random-metric builder and the tests.
CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Hermitian with N(0, scale^2) diagonal and complex Gaussian off-diagonal
/// entries of the same variance.
CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0);

} // namespace ncflow

#endif
