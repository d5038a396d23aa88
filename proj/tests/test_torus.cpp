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

TEST_CASE("build_torus: n=2 clock and shift") {
    const TorusGeometry g = build_torus({2, 1});
    CMatrix u(2, 2), v(2, 2);
    u << 1.0, 0.0, 0.0, -1.0;
    v << 0.0, 1.0, 1.0, 0.0;
    CHECK((g.u - u).norm() < 1e-15);
    CHECK((g.v - v).norm() < 1e-15);
    CHECK(std::abs(g.q - Complex(-1.0)) < 1e-15);
}

TEST_CASE("build_torus: n=3, m=2 relation") {
    const TorusGeometry g = build_torus({3, 2});
    CHECK((g.v * g.u - g.q * g.u * g.v).norm() <= 1e-14);
}

TEST_CASE("build_torus: parameter validation") {
    auto kind_of = [](TorusParams p) {
        try {
            build_torus(p);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidInput;
    };
    CHECK(kind_of({4, 2}) == ErrorKind::InvalidParams);
    CHECK(kind_of({1, 1}) == ErrorKind::InvalidParams);
    CHECK(kind_of({5, 0}) == ErrorKind::InvalidParams);
    CHECK(kind_of({5, 5}) == ErrorKind::InvalidParams);
    CHECK(kind_of({6, 3}) == ErrorKind::InvalidParams);
    CHECK_NOTHROW(build_torus({6, 5}));
}

TEST_CASE("valid_params: enumeration up to 8") {
    const auto ps = valid_params(8);
    // Euler totients for n = 2..8 sum to 1+2+2+4+2+6+4
    CHECK(ps.size() == 21);
    CHECK(ps.front().n == 2);
    CHECK(ps.back().n == 8);
    CHECK(ps.back().m == 7);
}

TEST_CASE("build_log_generators: n=2 values") {
    const auto [x, y] = build_log_generators(2, 1);
    CMatrix x_expected = CMatrix::Zero(2, 2);
    x_expected(1, 1) = 1.0;
    CMatrix y_expected(2, 2);
    y_expected << 0.5, -0.5, -0.5, 0.5;
    CHECK((x - x_expected).norm() < 1e-15);
    CHECK((y - y_expected).norm() < 1e-15);

    const CMatrix eu = ncflow::testing::exp_pade(Complex(0.0, std::numbers::pi) * x);
    const CMatrix ev = ncflow::testing::exp_pade(Complex(0.0, std::numbers::pi) * y);
    CMatrix u(2, 2), v(2, 2);
    u << 1.0, 0.0, 0.0, -1.0;
    v << 0.0, 1.0, 1.0, 0.0;
    CHECK((eu - u).norm() < 1e-14);
    CHECK((ev - v).norm() < 1e-14);
}

TEST_CASE("build_log_generators: x real diagonal, y Hermitian, for every valid (n, m)") {
    for (const TorusParams& p : valid_params(8)) {
        const auto [x, y] = build_log_generators(p.n, p.m);
        CHECK(x.imag().norm() == 0.0);
        CHECK((x - CMatrix(x.diagonal().asDiagonal())).norm() == 0.0);
        CHECK(hermiticity_defect(y) == 0.0);
    }
}

TEST_CASE("geometry invariants for every valid (n, m) with n <= 8") {
    for (const TorusParams& p : valid_params(8)) {
        CAPTURE(p.n);
        CAPTURE(p.m);
        const TorusGeometry g = build_torus(p);
        const GeometryResiduals r = check_geometry(g);
        CHECK(r.relation <= 1e-12);
        CHECK(r.u_unitary <= 1e-12);
        CHECK(r.v_unitary <= 1e-12);
        CHECK(r.exp_x <= 1e-11);
        CHECK(r.exp_y <= 1e-11);
        CHECK(r.q_primitive);
        CHECK(r.commutant_dim == 1);

        // the exponentials, against Eigen's Pade exponential
        const double s = 2.0 * std::numbers::pi / p.n;
        CHECK((ncflow::testing::exp_pade(Complex(0.0, s) * g.x) - g.u).norm() <= 1e-11);
        CHECK((ncflow::testing::exp_pade(Complex(0.0, s) * g.y) - g.v).norm() <= 1e-11);
    }
}

TEST_CASE("check_geometry: tampering is detected") {
    TorusGeometry g = build_torus({3, 1});
    SUBCASE("non-unitary v") {
        g.v(0, 1) = 2.0;
        const GeometryResiduals r = check_geometry(g);
        CHECK(r.v_unitary > 1.0);
        // entrywise rescaling keeps vu = q uv; the exponential check catches it
        CHECK(r.exp_y > 1e-3);
    }
    SUBCASE("v replaced by a diagonal commuting with u") {
        g.v = g.u;
        const GeometryResiduals r = check_geometry(g);
        CHECK(r.relation > 1e-3);
        CHECK(r.commutant_dim == 3);
    }
    SUBCASE("q not primitive") {
        g.q = 1.0;
        CHECK_FALSE(check_geometry(g).q_primitive);
    }
}

TEST_CASE("commutant_dimension: independent count of commuting matrices") {
    // Pair of commuting diagonals: the commutant is all diagonals.
    const TorusGeometry g = build_torus({4, 1});
    CHECK(commutant_dimension(g.u, g.u) == 4);
    CHECK(commutant_dimension(CMatrix::Identity(3, 3), CMatrix::Identity(3, 3)) == 9);
}

TEST_CASE("derivations: unit, diagonal, Leibniz") {
    Gen gen(53);
    for (const TorusParams& p : valid_params(6)) {
        const TorusGeometry g = build_torus(p);
        const Eigen::Index n = g.n();
        const CMatrix id = CMatrix::Identity(n, n);
        CHECK(derivation1(g, id).norm() == 0.0);
        CHECK(derivation2(g, id).norm() == 0.0);
        CHECK(derivation2(g, g.u).norm() == 0.0);
        for (int trial = 0; trial < 10; ++trial) {
            const CMatrix a = gen.matrix(n);
            const CMatrix b = gen.matrix(n);
            const double scale = a.norm() * b.norm() * std::max(g.x.norm(), g.y.norm());
            CHECK((derivation1(g, a * b) - derivation1(g, a) * b - a * derivation1(g, b)).norm() <= 1e-12 * scale);
            CHECK((derivation2(g, a * b) - derivation2(g, a) * b - a * derivation2(g, b)).norm() <= 1e-12 * scale);
            CHECK((derivation1(g, a) - (g.y * a - a * g.y)).norm() == 0.0);
            CHECK((derivation2(g, a) - (a * g.x - g.x * a)).norm() == 0.0);
        }
    }
    const TorusGeometry g = build_torus({2, 1});
    CHECK_THROWS_AS(derivation1(g, CMatrix::Zero(3, 3)), Error);
    CHECK_THROWS_AS(derivation2(g, CMatrix::Zero(3, 3)), Error);
}

TEST_CASE("laplacian_apply: identity, n=2 clock eigenvector, trace, Hermiticity") {
    const TorusGeometry g2 = build_torus({2, 1});
    CHECK(laplacian_apply(g2, CMatrix::Identity(2, 2)).norm() == 0.0);
    CHECK((laplacian_apply(g2, g2.u) - g2.u).norm() < 1e-14);
    CHECK((laplacian_apply(g2, g2.v) - g2.v).norm() < 1e-14);
    // u v is the Pauli y up to phase: both derivations contribute
    CHECK((laplacian_apply(g2, g2.u * g2.v) - 2.0 * g2.u * g2.v).norm() < 1e-14);

    Gen gen(59);
    for (const TorusParams& p : valid_params(8)) {
        const TorusGeometry g = build_torus(p);
        for (int trial = 0; trial < 5; ++trial) {
            const CMatrix a = gen.matrix(g.n());
            const CMatrix la = laplacian_apply(g, a);
            CHECK(std::abs(la.trace()) <= 1e-12 * la.norm() + 1e-12 * a.norm());
            CHECK((la.adjoint() - laplacian_apply(g, a.adjoint())).norm() <= 1e-12 * la.norm());
            const CMatrix h = gen.hermitian(g.n());
            CHECK(hermiticity_defect(laplacian_apply(g, h)) <= 1e-12 * h.norm() * (g.x.norm() + g.y.norm()) * (g.x.norm() + g.y.norm()));
        }
    }
    CHECK_THROWS_AS(laplacian_apply(g2, CMatrix::Zero(3, 3)), Error);
}

TEST_CASE("laplacian_superop: n=2 spectrum {0, 1, 1, 2}") {
    const TorusGeometry g = build_torus({2, 1});
    const HermitianEig e = hermitian_eig(laplacian_superop(g).matrix);
    const double expected[] = {0.0, 1.0, 1.0, 2.0};
    for (int i = 0; i < 4; ++i) CHECK(std::abs(e.eigenvalues(i) - expected[i]) < 1e-14);
    // flattened u has eigenvalue 1
    const CVector fu = flatten(g.u);
    CHECK((laplacian_superop(g).matrix * fu - fu).norm() < 1e-14);
}

TEST_CASE("laplacian_superop: matches the Kronecker assembly, PSD, one-dimensional kernel") {
    for (const TorusParams& p : valid_params(8)) {
        CAPTURE(p.n);
        CAPTURE(p.m);
        const TorusGeometry g = build_torus(p);
        const Superoperator lap = laplacian_superop(g);
        const CMatrix kron = ncflow::testing::laplacian_kron(g.x, g.y);
        const double norm = lap.matrix.norm();
        CHECK((lap.matrix - kron).norm() <= 1e-12 * norm);
        CHECK(hermiticity_defect(lap.matrix) <= 1e-12 * norm);

        const KernelInfo info = kernel_info(lap);
        CHECK(info.min_eigenvalue >= -1e-12 * info.norm);
        CHECK(info.dimension == 1);
        CHECK(info.gap > 1e-6);

        // kernel spanned by flattened I
        const Eigen::SelfAdjointEigenSolver<CMatrix> es(kron);
        const CVector unit = flatten(CMatrix::Identity(g.n(), g.n())) / std::sqrt(static_cast<double>(g.n()));
        CHECK(std::abs(std::abs(unit.dot(es.eigenvectors().col(0))) - 1.0) < 1e-10);
    }
}

TEST_CASE("laplacian: trace of the image vanishes for 100 seeded matrices") {
    Gen gen(61);
    const TorusGeometry g = build_torus({5, 2});
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix a = gen.matrix(5);
        CHECK(std::abs(laplacian_apply(g, a).trace()) <= 1e-12 * a.norm());
    }
}
