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

#include "ncflow/torus.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace ncflow {

namespace {

// exp(2 pi i k / n), with k reduced mod n first to keep the phase small.
Complex root_of_unity(long k, int n) {
    const long r = ((k % n) + n) % n;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
}

void require_geometry_shape(const TorusGeometry& g, const CMatrix& a, const char* what) {
    if (a.rows() != g.n() || a.cols() != g.n()) {
        fail(ErrorKind::InvalidInput,
             std::string(what) + ": expected " + std::to_string(g.n()) + "x" +
                 std::to_string(g.n()) + " matrix, got " + std::to_string(a.rows()) + "x" +
                 std::to_string(a.cols()));
    }
}

CMatrix exp_i_scaled(const CMatrix& h, double s) {
    return matrix_function(h, [s](double lam) { return std::polar(1.0, s * lam); });
}

} // namespace

void validate(const TorusParams& params) {
    if (params.n < 2) {
        fail(ErrorKind::InvalidParams, "n must be >= 2, got " + std::to_string(params.n));
    }
    if (params.m < 1 || params.m > params.n - 1) {
        fail(ErrorKind::InvalidParams, "m must lie in 1..n-1, got m = " +
                                           std::to_string(params.m) + " for n = " +
                                           std::to_string(params.n));
    }
    if (std::gcd(params.m, params.n) != 1) {
        fail(ErrorKind::InvalidParams, "m and n must be coprime, got gcd(" +
                                           std::to_string(params.m) + ", " +
                                           std::to_string(params.n) + ") = " +
                                           std::to_string(std::gcd(params.m, params.n)));
    }
}

std::vector<TorusParams> valid_params(int n_max) {
    std::vector<TorusParams> out;
    for (int n = 2; n <= n_max; ++n)
        for (int m = 1; m < n; ++m)
            if (std::gcd(m, n) == 1) out.push_back({n, m});
    return out;
}

std::pair<CMatrix, CMatrix> build_log_generators(int n, int m) {
    validate({n, m});
    CMatrix x = CMatrix::Zero(n, n);
    CMatrix ramp = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        x(j, j) = static_cast<double>(m) * j;
        ramp(j, j) = static_cast<double>(j);
    }
    CMatrix dft(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            dft(j, k) = norm * root_of_unity(static_cast<long>(j) * k, n);
    CMatrix y = hermitian_part(dft * ramp * dft.adjoint());
    return {std::move(x), std::move(y)};
}

TorusGeometry build_torus(const TorusParams& params) {
    validate(params);
    const int n = params.n;
    TorusGeometry g;
    g.params = params;
    g.q = root_of_unity(params.m, n);
    g.u = CMatrix::Zero(n, n);
    g.v = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        g.u(j, j) = root_of_unity(static_cast<long>(params.m) * j, n);
        g.v(j, (j + 1) % n) = 1.0;
    }
    std::tie(g.x, g.y) = build_log_generators(n, params.m);
    return g;
}

CMatrix derivation1(const TorusGeometry& g, const CMatrix& a) {
    require_geometry_shape(g, a, "derivation1");
    return g.y * a - a * g.y;
}

CMatrix derivation2(const TorusGeometry& g, const CMatrix& a) {
    require_geometry_shape(g, a, "derivation2");
    return a * g.x - g.x * a;
}

CMatrix laplacian_apply(const TorusGeometry& g, const CMatrix& a) {
    require_geometry_shape(g, a, "laplacian_apply");
    const CMatrix ya = g.y * a - a * g.y;
    const CMatrix xa = g.x * a - a * g.x;
    return (g.y * ya - ya * g.y) + (g.x * xa - xa * g.x);
}

Superoperator laplacian_superop(const TorusGeometry& g) {
    return superop_from_map(g.n(), [&g](const CMatrix& a) { return laplacian_apply(g, a); });
}

KernelInfo kernel_info(const Superoperator& op) {
    const HermitianEig eig = hermitian_eig(op.matrix);
    const auto& lam = eig.eigenvalues;
    KernelInfo info;
    info.min_eigenvalue = lam(0);
    info.norm = std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
    const double threshold = kKernelThreshold * std::max(info.norm, 1.0);
    info.gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (std::abs(lam(i)) <= threshold) {
            ++info.dimension;
        } else if (lam(i) > 0.0) {
            info.gap = std::min(info.gap, lam(i));
        }
    }
    return info;
}

int commutant_dimension(const CMatrix& u, const CMatrix& v) {
    require_square(u, "commutant_dimension");
    require_same_shape(u, v, "commutant_dimension");
    const Eigen::Index n = u.rows();
    const Superoperator ad_u = superop_from_map(n, [&u](const CMatrix& a) { return commutator(u, a); });
    const Superoperator ad_v = superop_from_map(n, [&v](const CMatrix& a) { return commutator(v, a); });
    Superoperator gram;
    gram.n = n;
    gram.matrix = hermitian_part(ad_u.matrix.adjoint() * ad_u.matrix +
                                 ad_v.matrix.adjoint() * ad_v.matrix);
    return kernel_info(gram).dimension;
}

GeometryResiduals check_geometry(const TorusGeometry& g) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    GeometryResiduals r;
    const Eigen::Index n = g.n();
    const CMatrix id = CMatrix::Identity(n, n);

    r.relation = (g.v * g.u - g.q * g.u * g.v).norm();
    r.u_unitary = (g.u.adjoint() * g.u - id).norm();
    r.v_unitary = (g.v.adjoint() * g.v - id).norm();

    const double s = 2.0 * std::numbers::pi / static_cast<double>(n);
    try {
        r.exp_x = (exp_i_scaled(g.x, s) - g.u).norm();
    } catch (const Error&) {
        r.exp_x = inf;
    }
    try {
        r.exp_y = (exp_i_scaled(g.y, s) - g.v).norm();
    } catch (const Error&) {
        r.exp_y = inf;
    }

    constexpr double root_tol = 1e-12;
    Complex power(1.0);
    r.q_primitive = true;
    for (Eigen::Index j = 1; j <= n; ++j) {
        power *= g.q;
        const bool is_one = std::abs(power - 1.0) <= root_tol;
        if ((j < n && is_one) || (j == n && !is_one)) r.q_primitive = false;
    }

    r.commutant_dim = commutant_dimension(g.u, g.v);
    return r;
}

} // namespace ncflow
