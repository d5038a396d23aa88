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

#include <doctest.h>

#include <numbers>

#include "ncflow/torus.hpp"
#include "support.hpp"

using namespace ncflow;
using ncflow::testing::Gen;

namespace {

CMatrix diag2(Complex a, Complex b) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

} // namespace

TEST_CASE("hermitian_eig: diagonal and Pauli-type inputs") {
    const HermitianEig d = hermitian_eig(diag2(3.0, 1.0));
    CHECK(d.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.eigenvalues(1) == doctest::Approx(3.0).epsilon(1e-15));

    CMatrix sx(2, 2);
    sx << 0.0, 1.0, 1.0, 0.0;
    const HermitianEig p = hermitian_eig(sx);
    CHECK(std::abs(p.eigenvalues(0) + 1.0) < 1e-15);
    CHECK(std::abs(p.eigenvalues(1) - 1.0) < 1e-15);
}

TEST_CASE("hermitian_eig: reconstruction and unitarity on seeded inputs") {
    Gen gen(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = gen.integer(1, 8);
        const CMatrix a = gen.hermitian(n);
        const HermitianEig e = hermitian_eig(a);
        const double tol = 1e-12 * static_cast<double>(n) * a.norm();
        const CMatrix rebuilt = e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
        CHECK((rebuilt - a).norm() <= tol);
        CHECK((e.eigenvectors.adjoint() * e.eigenvectors - CMatrix::Identity(n, n)).norm() <= 1e-12 * n);
        for (Eigen::Index i = 1; i < n; ++i) CHECK(e.eigenvalues(i - 1) <= e.eigenvalues(i));
    }
}

TEST_CASE("hermitian_eig: deterministic for identical input") {
    Gen gen(3);
    const CMatrix a = gen.hermitian(5);
    const HermitianEig e1 = hermitian_eig(a);
    const HermitianEig e2 = hermitian_eig(a);
    CHECK(e1.eigenvalues == e2.eigenvalues);
    CHECK(e1.eigenvectors == e2.eigenvectors);
}

TEST_CASE("hermitian_eig: tolerance band for Hermiticity") {
    Gen gen(5);
    CMatrix a = gen.hermitian(4);
    CMatrix noise = gen.matrix(4);
    SUBCASE("tiny skew part is symmetrized away") {
        const CMatrix b = a + noise * (1e-12 * a.norm() / noise.norm());
        CHECK_NOTHROW(hermitian_eig(b));
    }
    SUBCASE("skew part above tolerance is rejected") {
        const CMatrix b = a + noise * (1e-6 * a.norm() / noise.norm());
        try {
            hermitian_eig(b);
            FAIL("expected InvalidInput");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidInput);
        }
    }
    SUBCASE("non-square") {
        CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), Error);
    }
}

TEST_CASE("matrix_function: diagonal exp and log of identity") {
    const CMatrix e = matrix_function(diag2(0.0, std::log(2.0)), [](double x) { return std::exp(x); });
    CHECK((e - diag2(1.0, 2.0)).norm() < 1e-15);
    const CMatrix l = matrix_function(CMatrix::Identity(3, 3), [](double x) { return std::log(x); });
    CHECK(l.norm() == 0.0);
}

TEST_CASE("matrix_function: sqrt squared recovers HPD input") {
    Gen gen(17);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix c = gen.positive(3);
        const CMatrix s = matrix_function(c, [](double x) { return std::sqrt(x); });
        CHECK((s * s - c).norm() <= 1e-12 * c.norm());
        CHECK((s - ncflow::testing::sqrt_schur(c)).norm() <= 1e-12 * s.norm());
    }
}

TEST_CASE("matrix_function: log agrees with Pade reference") {
    Gen gen(19);
    for (int trial = 0; trial < 20; ++trial) {
        const CMatrix c = gen.positive(4);
        const CMatrix l = matrix_function(c, [](double x) { return std::log(x); });
        CHECK((l - ncflow::testing::log_pade(c)).norm() <= 1e-12 * std::max(1.0, l.norm()));
        CHECK(hermiticity_defect(l) == 0.0);
    }
}

TEST_CASE("matrix_function: identity function returns the input") {
    Gen gen(23);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = gen.integer(1, 6);
        const CMatrix a = gen.hermitian(n);
        CHECK((matrix_function(a, [](double x) { return x; }) - a).norm() <= 1e-12 * n * a.norm());
    }
}

TEST_CASE("matrix_function: complex-valued f") {
    CMatrix x = CMatrix::Zero(2, 2);
    x(1, 1) = 1.0;
    const CMatrix u = matrix_function(x, [](double t) { return std::polar(1.0, std::numbers::pi * t); });
    CHECK((u - diag2(1.0, -1.0)).norm() < 1e-15);
}

TEST_CASE("matrix_function: log at a non-positive eigenvalue reports it") {
    try {
        matrix_function(diag2(2.0, -0.5), [](double x) { return std::log(x); });
        FAIL("expected SpectrumOutOfDomain");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SpectrumOutOfDomain);
        CHECK(std::string(e.what()).find("-0.5") != std::string::npos);
    }
    CHECK_THROWS_AS(matrix_function(diag2(0.0, 1.0), [](double x) { return std::log(x); }), Error);
}

TEST_CASE("hs_inner: identity, clock/shift orthogonality, symmetry") {
    CHECK(hs_inner(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) == Complex(2.0));
    const TorusGeometry g = build_torus({2, 1});
    CHECK(std::abs(hs_inner(g.u, g.v)) < 1e-15);

    Gen gen(29);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = gen.integer(1, 6);
        const CMatrix a = gen.matrix(n);
        const CMatrix b = gen.matrix(n);
        CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) <= 1e-12 * a.norm() * b.norm());
        CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) <= 1e-12 * a.norm() * b.norm());
        const Complex aa = hs_inner(a, a);
        CHECK(aa.real() > 0.0);
        CHECK(aa.imag() == 0.0);
        // conjugate-linear in the first slot
        const Complex alpha(0.3, -1.1);
        CHECK(std::abs(hs_inner(alpha * a, b) - std::conj(alpha) * hs_inner(a, b)) <= 1e-12 * a.norm() * b.norm());
        CHECK(std::abs(hs_inner(a, alpha * b) - alpha * hs_inner(a, b)) <= 1e-12 * a.norm() * b.norm());
    }
    CHECK_THROWS_AS(hs_inner(CMatrix::Zero(2, 2), CMatrix::Zero(3, 3)), Error);
}

TEST_CASE("commutator: trivial cases, tracelessness, shape errors") {
    Gen gen(31);
    const CMatrix a = gen.matrix(4);
    CHECK(commutator(CMatrix::Identity(4, 4), a).norm() == 0.0);
    const TorusGeometry g = build_torus({4, 1});
    CHECK(commutator(g.x, g.x).norm() == 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix p = gen.matrix(3);
        const CMatrix b = gen.matrix(3);
        CHECK(std::abs(commutator(p, b).trace()) <= 1e-12 * p.norm() * b.norm());
    }
    CHECK_THROWS_AS(commutator(CMatrix::Zero(2, 2), CMatrix::Zero(3, 3)), Error);
}

TEST_CASE("flatten: row-major convention round-trips") {
    Gen gen(37);
    const CMatrix a = gen.matrix(3);
    const CVector v = flatten(a);
    CHECK(v(1) == a(0, 1));
    CHECK(v(3) == a(1, 0));
    CHECK(unflatten(v, 3) == a);
    CHECK(std::abs(hs_inner(a, a) - v.dot(v)) < 1e-12);
}

TEST_CASE("superop_from_map: identity map") {
    const Superoperator s = superop_from_map(2, [](const CMatrix& a) { return a; });
    CHECK(s.matrix == CMatrix::Identity(4, 4));
}

TEST_CASE("superop_from_map: Laplacian annihilates flattened I") {
    const TorusGeometry g = build_torus({2, 1});
    const Superoperator s = superop_from_map(2, [&g](const CMatrix& a) { return laplacian_apply(g, a); });
    CHECK((s.matrix * flatten(CMatrix::Identity(2, 2))).norm() < 1e-15);
}

TEST_CASE("superop_from_map: [x, .] with diagonal x is diagonal with x_jj - x_kk") {
    const TorusGeometry g = build_torus({5, 2});
    const Superoperator s = superop_from_map(5, [&g](const CMatrix& a) { return commutator(g.x, a); });
    for (Eigen::Index r = 0; r < 25; ++r)
        for (Eigen::Index c = 0; c < 25; ++c) {
            const Complex expected = r == c ? g.x(r / 5, r / 5) - g.x(r % 5, r % 5) : Complex(0.0);
            CHECK(std::abs(s.matrix(r, c) - expected) < 1e-14);
        }
}

TEST_CASE("superop_from_map: agrees with Kronecker assembly and with the map") {
    Gen gen(43);
    for (int n = 2; n <= 4; ++n) {
        const CMatrix p = gen.matrix(n);
        const CMatrix q = gen.matrix(n);
        const Superoperator s = superop_from_map(n, [&](const CMatrix& a) -> CMatrix { return p * a * q; });
        const CMatrix kron = ncflow::testing::left_mult(p) * ncflow::testing::right_mult(q);
        CHECK((s.matrix - kron).norm() <= 1e-12 * kron.norm());
        for (int trial = 0; trial < 100; ++trial) {
            const CMatrix b = gen.matrix(n);
            CHECK((s.apply(b) - p * b * q).norm() <= 1e-12 * s.matrix.norm() * b.norm());
        }
    }
}

TEST_CASE("superop_from_map: errors") {
    SUBCASE("wrong output shape") {
        try {
            superop_from_map(2, [](const CMatrix&) { return CMatrix(CMatrix::Zero(3, 3)); });
            FAIL("expected InvalidInput");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidInput);
        }
    }
    SUBCASE("nonlinear map is caught by the spot check") {
        CHECK_THROWS_AS(superop_from_map(2, [](const CMatrix& a) -> CMatrix { return a * a; }), Error);
        CHECK_THROWS_AS(superop_from_map(2, [](const CMatrix& a) -> CMatrix { return a.adjoint(); }), Error);
    }
}

TEST_CASE("random_hermitian: Hermitian and seeded") {
    std::mt19937_64 r1(9), r2(9);
    const CMatrix a = random_hermitian(4, r1, 0.3);
    const CMatrix b = random_hermitian(4, r2, 0.3);
    CHECK(a == b);
    CHECK(hermiticity_defect(a) == 0.0);
}
