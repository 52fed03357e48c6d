// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adaf/checks.hpp"
#include "adaf/numkernel.hpp"

#include <cmath>

using namespace adaf;
using namespace adaf::linalg;

namespace {

CMatrix gaussian(int rows, int cols, Rng& rng) {
    CMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = complex_normal(rng);
    return g;
}

CMatrix random_pd(int dim, Rng& rng, double ridge = 1e-6) {
    const CMatrix g = gaussian(dim, dim, rng);
    CMatrix a = g.adjoint() * g;
    a.diagonal().array() += ridge;
    return a;
}

// Textbook Gauss-Jordan inverse used as an independent reference.
CMatrix gauss_jordan_inverse(CMatrix a) {
    const auto n = a.rows();
    CMatrix inv = CMatrix::Identity(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = c;
        for (Eigen::Index r = c + 1; r < n; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        a.row(c).swap(a.row(piv));
        inv.row(c).swap(inv.row(piv));
        const cd d = a(c, c);
        a.row(c) /= d;
        inv.row(c) /= d;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c) continue;
            const cd f = a(r, c);
            a.row(r) -= f * a.row(c);
            inv.row(r) -= f * inv.row(c);
        }
    }
    return inv;
}

}  // namespace

TEST_CASE("eigendecomposition of identity and diagonal matrices") {
    const HermitianEig id = hermitian_eig(CMatrix::Identity(3, 3));
    CHECK((id.values - RVector::Ones(3)).norm() < 1e-14);

    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 5.0;
    d(1, 1) = 2.0;
    const HermitianEig e = hermitian_eig(d);
    CHECK(e.values(0) == doctest::Approx(2.0));
    CHECK(e.values(1) == doctest::Approx(5.0));
    CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs random PSD matrices") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const CMatrix a = random_pd(6, rng, 0.0);
        const HermitianEig e = hermitian_eig(a);
        for (int i = 1; i < 6; ++i) CHECK(e.values(i) >= e.values(i - 1));
        const CMatrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
        CHECK((rebuilt - a).norm() <= 1e-9 * a.norm());
        CHECK((e.vectors.adjoint() * e.vectors - CMatrix::Identity(6, 6)).norm() <= 6e-10);
        for (int q = 0; q < 6; ++q) {
            CHECK((a * e.vectors.col(q) - e.values(q) * e.vectors.col(q)).norm() <= 1e-9 * a.norm());
            // phase convention: largest-magnitude entry is real positive
            Eigen::Index p = 0;
            e.vectors.col(q).cwiseAbs().maxCoeff(&p);
            CHECK(std::abs(e.vectors(p, q).imag()) < 1e-12);
            CHECK(e.vectors(p, q).real() > 0.0);
        }
    }
}

TEST_CASE("eigendecomposition rejects non-square input") {
    CHECK_THROWS_AS(hermitian_eig(CMatrix::Zero(2, 3)), InvalidInput);
}

TEST_CASE("cholesky factor") {
    CHECK((cholesky_factor(CMatrix::Identity(4, 4)) - CMatrix::Identity(4, 4)).norm() < 1e-15);

    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 9.0;
    const CMatrix c = cholesky_factor(a);
    CHECK(c(0, 0).real() == doctest::Approx(2.0));
    CHECK(c(1, 1).real() == doctest::Approx(3.0));

    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        const CMatrix m = random_pd(5, rng, 1e-6);
        const CMatrix l = cholesky_factor(m);
        CHECK((l * l.adjoint() - m).norm() <= 1e-10 * m.norm());
        CHECK(l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm() == 0.0);
    }
}

TEST_CASE("cholesky names the failing leading minor") {
    CMatrix a = CMatrix::Identity(3, 3);
    a(2, 2) = -1.0;
    try {
        cholesky_factor(a);
        FAIL("expected failure");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("leading minor 3") != std::string::npos);
    }
}

TEST_CASE("cholesky jitter rescues a numerically semidefinite matrix") {
    Rng rng(8);
    const CMatrix g = gaussian(4, 3, rng);
    const CMatrix a = g * g.adjoint();  // rank 3 of 4
    CHECK_THROWS_AS(cholesky_factor(a, false), NumericalError);
    const CMatrix l = cholesky_factor(a, true);
    CHECK((l * l.adjoint() - a).norm() <= 1e-9 * a.norm());
}

TEST_CASE("hermitian solves") {
    Rng rng(3);
    const CMatrix b = gaussian(4, 2, rng);
    CHECK((solve_hermitian(CMatrix::Identity(4, 4), b) - b).norm() < 1e-14);
    const CMatrix half = solve_hermitian(2.0 * CMatrix::Identity(3, 3), CMatrix::Identity(3, 3));
    CHECK((half - 0.5 * CMatrix::Identity(3, 3)).norm() < 1e-15);

    for (int t = 0; t < 10; ++t) {
        const CMatrix a = random_pd(6, rng, 0.1);
        const CMatrix rhs = gaussian(6, 3, rng);
        const CMatrix x = solve_hermitian(a, rhs);
        CHECK((a * x - rhs).norm() / rhs.norm() <= 1e-9);
        CHECK((x - gauss_jordan_inverse(a) * rhs).norm() <= 1e-8 * x.norm());
    }

    CMatrix singular = CMatrix::Identity(3, 3);
    singular(2, 2) = 1e-14;
    CHECK_THROWS_AS(solve_hermitian(singular, CMatrix::Identity(3, 3)), NumericalError);
}

TEST_CASE("projectors") {
    const CMatrix e1 = CMatrix::Identity(4, 1);
    const Projectors p = projectors(e1);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    CHECK((p.range - expected).norm() < 1e-14);

    Rng rng(4);
    const CMatrix b = gaussian(16, 4, rng);
    const Projectors q = projectors(b);
    CHECK((q.range * b - b).norm() <= 1e-10 * b.norm());
    CHECK((q.complement * b).norm() <= 1e-10 * b.norm());
    CHECK((q.range * q.range - q.range).norm() <= 1e-9);
    CHECK((q.complement * q.complement - q.complement).norm() <= 1e-9);
    CHECK((q.range - q.range.adjoint()).norm() <= 1e-9);
    CHECK((q.range + q.complement - CMatrix::Identity(16, 16)).norm() <= 1e-14);

    CMatrix deficient = gaussian(8, 3, rng);
    deficient.col(2) = deficient.col(0) + deficient.col(1);
    CHECK_THROWS_AS(projectors(deficient), NumericalError);
}

TEST_CASE("branch optimality solver") {
    const TraceInverseBasis id = trace_inverse_basis(CMatrix::Identity(3, 3));
    CHECK(id.objective == doctest::Approx(3.0));
    CHECK((id.vectors.cwiseAbs() - RMatrix::Identity(3, 3)).norm() < 1e-12);

    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 4.0;
    CHECK(trace_inverse_basis(d).objective == doctest::Approx(1.75));

    Rng rng(21);
    const CMatrix a = random_pd(5, rng, 0.1);
    const TraceInverseBasis best = trace_inverse_basis(a);
    const double trace_inv = gauss_jordan_inverse(a).trace().real();
    CHECK(std::abs(best.objective - trace_inv) <= 1e-9 * trace_inv);
    for (int u = 0; u < 1000; ++u) {
        const CMatrix y = random_unitary(5, rng);
        double obj = 0.0;
        for (int q = 0; q < 5; ++q) obj += 1.0 / (y.col(q).adjoint() * a * y.col(q))(0).real();
        CHECK(obj <= best.objective + 1e-9);
    }
    double at_eigen = 0.0;
    for (int q = 0; q < 5; ++q)
        at_eigen += 1.0 / (best.vectors.col(q).adjoint() * a * best.vectors.col(q))(0).real();
    CHECK(std::abs(at_eigen - best.objective) <= 1e-9 * best.objective);
}

TEST_CASE("random unitary is unitary") {
    Rng rng(2);
    for (int d = 1; d <= 8; ++d) {
        const CMatrix u = random_unitary(d, rng);
        CHECK((u.adjoint() * u - CMatrix::Identity(d, d)).norm() < 1e-12);
    }
}
