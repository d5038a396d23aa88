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

#ifndef NCFLOW_TORUS_HPP
#define NCFLOW_TORUS_HPP

#include <utility>
#include <vector>

#include "ncflow/linalg.hpp"

namespace ncflow {

/// Fuzzy torus parameters: M_n with twist q = exp(2 pi i m / n).
/// Requires n >= 2, 1 <= m <= n-1 and gcd(m, n) = 1.
struct TorusParams {
    int n = 2;
    int m = 1;
};

void validate(const TorusParams& params);

/// All valid (n, m) with 2 <= n <= n_max, ordered by (n, m).
std::vector<TorusParams> valid_params(int n_max);

/// Clock u, shift v and Hermitian generators x, y with
/// u = exp(2 pi i x / n), v = exp(2 pi i y / n), vu = q uv.
/// Immutable after construction.
struct TorusGeometry {
    TorusParams params;
    Complex q;
    CMatrix u;
    CMatrix v;
    CMatrix x;
    CMatrix y;

    Eigen::Index n() const { return u.rows(); }
};

TorusGeometry build_torus(const TorusParams& params);

/// Canonical logarithms: x = m diag(0..n-1), y = F diag(0..n-1) F^* with
/// F the unitary DFT matrix F_jk = exp(2 pi i jk/n)/sqrt(n).
std::pair<CMatrix, CMatrix> build_log_generators(int n, int m);

// delta1 = [y, .], delta2 = -[x, .]
CMatrix derivation1(const TorusGeometry& g, const CMatrix& a);
CMatrix derivation2(const TorusGeometry& g, const CMatrix& a);

/// Flat Laplacian [y,[y,a]] + [x,[x,a]].
CMatrix laplacian_apply(const TorusGeometry& g, const CMatrix& a);

Superoperator laplacian_superop(const TorusGeometry& g);

// Eigenvalues at or below this multiple of the spectral norm count as zero.
inline constexpr double kKernelThreshold = 1e-8;

struct KernelInfo {
    int dimension = 0;
    double gap = 0.0;       // smallest eigenvalue above threshold
    double min_eigenvalue = 0.0;
    double norm = 0.0;      // largest |eigenvalue|
};

/// Kernel dimension and gap of a Hermitian PSD superoperator.
KernelInfo kernel_info(const Superoperator& op);

/// Dimension of the commutant {a : [u,a] = [v,a] = 0}, computed as the
/// nullity of the stacked superoperators of [u,.] and [v,.].
int commutant_dimension(const CMatrix& u, const CMatrix& v);

/// Residuals of the defining relations, evaluated on the stored matrices
/// only (so a geometry loaded from disk is checked as-is).
struct GeometryResiduals {
    double relation = 0.0;     // |vu - q uv|
    double u_unitary = 0.0;    // |u^*u - I|
    double v_unitary = 0.0;
    double exp_x = 0.0;        // |exp(2 pi i x / n) - u|
    double exp_y = 0.0;
    bool q_primitive = false;  // q^n = 1 and q^j != 1 for 0 < j < n
    int commutant_dim = 0;
};

GeometryResiduals check_geometry(const TorusGeometry& g);

} // namespace ncflow

#endif
