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

// Independent reference computations used by the test suites. Nothing here
// calls into the code paths it is used to check.

#ifndef NCFLOW_TESTS_SUPPORT_HPP
#define NCFLOW_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ncflow/linalg.hpp"

namespace ncflow::testing {

// Seeded generators for property tests.
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    CMatrix matrix(Eigen::Index n) {
        CMatrix a(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k) a(j, k) = Complex(normal(), normal());
        return a;
    }

    CMatrix hermitian(Eigen::Index n) {
        const CMatrix a = matrix(n);
        return (a + a.adjoint()) * 0.5;
    }

    // b b^* + eps I, comfortably positive definite.
    CMatrix positive(Eigen::Index n, double eps = 0.5) {
        const CMatrix b = matrix(n);
        return b * b.adjoint() / static_cast<double>(n) + eps * CMatrix::Identity(n, n);
    }
};

// Row-major vec: vec(A X B) = (A kron B^T) vec(X).
inline CMatrix left_mult(const CMatrix& a) {
    return Eigen::kroneckerProduct(a, CMatrix::Identity(a.rows(), a.cols())).eval();
}
inline CMatrix right_mult(const CMatrix& b) {
    return Eigen::kroneckerProduct(CMatrix::Identity(b.rows(), b.cols()), b.transpose()).eval();
}
inline CMatrix ad_kron(const CMatrix& p) { return left_mult(p) - right_mult(p); }

// Laplacian superoperator assembled from Kronecker products.
inline CMatrix laplacian_kron(const CMatrix& x, const CMatrix& y) {
    const CMatrix ax = ad_kron(x);
    const CMatrix ay = ad_kron(y);
    return ay * ay + ax * ax;
}

// Matrix logarithm of a positive definite matrix by Eigen's Schur-Pade route.
inline CMatrix log_pade(const CMatrix& c) { return c.log(); }
inline CMatrix sqrt_schur(const CMatrix& c) { return c.sqrt(); }
inline CMatrix exp_pade(const CMatrix& a) { return a.exp(); }

// Classical fixed-step RK4 on dc/dt = -Lap(log c), with the Laplacian and
// log taken from the Kronecker and Pade references above.
inline std::vector<CMatrix> rk4_flow(const CMatrix& x, const CMatrix& y, const CMatrix& c0,
                                     double t1, int steps) {
    const Eigen::Index n = c0.rows();
    const CMatrix lap = laplacian_kron(x, y);
    auto rhs = [&](const CMatrix& c) -> CMatrix {
        const CMatrix lg = log_pade(c);
        CVector flat(n * n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k) flat(j * n + k) = lg(j, k);
        const CVector out = -(lap * flat);
        CMatrix r(n, n);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k) r(j, k) = out(j * n + k);
        return r;
    };
    const double h = t1 / steps;
    std::vector<CMatrix> path{c0};
    CMatrix c = c0;
    for (int s = 0; s < steps; ++s) {
        const CMatrix k1 = rhs(c);
        const CMatrix k2 = rhs(c + 0.5 * h * k1);
        const CMatrix k3 = rhs(c + 0.5 * h * k2);
        const CMatrix k4 = rhs(c + h * k3);
        c = c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        c = (c + c.adjoint()).eval() * 0.5;
        path.push_back(c);
    }
    return path;
}

// Maximum assignment by exhaustive search over permutations (small sizes).
inline double best_assignment_brute(const Eigen::MatrixXd& score) {
    std::vector<int> perm(static_cast<std::size_t>(score.rows()));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    double best = -std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < perm.size(); ++i) total += score(static_cast<Eigen::Index>(i), perm[i]);
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace ncflow::testing

#endif
