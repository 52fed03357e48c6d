// SPDX-License-Identifier: Apache-2.0
#include "adaf/numkernel.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace adaf::linalg {
namespace {

void require_square(const CMatrix& a, const char* who) {
    require(a.rows() == a.cols() && a.rows() > 0,
            std::string(who) + ": expected a non-empty square matrix");
}

// Returns the index of the first leading minor that is not positive definite,
// or nullopt on success. Pivots smaller than a tiny fraction of the largest
// diagonal entry count as failures so that numerically singular inputs are
// rejected rather than producing huge inverse entries.
std::optional<Eigen::Index> factor_in_place(const CMatrix& a, CMatrix& lower) {
    const Eigen::Index n = a.rows();
    double max_diag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i).real()));
    const double floor = 1e-15 * max_diag;

    lower = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j).real();
        for (Eigen::Index k = 0; k < j; ++k) pivot -= std::norm(lower(j, k));
        if (!std::isfinite(pivot) || pivot <= floor) return j;
        const double root = std::sqrt(pivot);
        lower(j, j) = root;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            cd acc = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) acc -= lower(i, k) * std::conj(lower(j, k));
            lower(i, j) = acc / root;
        }
    }
    return std::nullopt;
}

}  // namespace

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

HermitianEig hermitian_eig(const CMatrix& a) {
    require_square(a, "hermitian_eig");
    if (!all_finite(a)) throw NumericalError("hermitian_eig: input has non-finite entries");
    const CMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericalError("hermitian_eig: eigen-solver did not converge");

    HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
        Eigen::Index pivot = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&pivot);
        const cd lead = out.vectors(pivot, j);
        if (std::abs(lead) > 0.0) out.vectors.col(j) *= std::conj(lead) / std::abs(lead);
    }
    return out;
}

CMatrix cholesky_factor(const CMatrix& a, bool allow_jitter) {
    require_square(a, "cholesky_factor");
    CMatrix lower;
    auto failed = factor_in_place(a, lower);
    if (!failed) return lower;
    if (allow_jitter) {
        const double jitter = 1e-12 * std::abs(a.trace().real()) / static_cast<double>(a.rows());
        CMatrix shifted = a;
        shifted.diagonal().array() += jitter;
        auto retry = factor_in_place(shifted, lower);
        if (!retry) return lower;
        failed = retry;
    }
    throw NumericalError("cholesky_factor: leading minor " + std::to_string(*failed + 1) +
                         " of " + std::to_string(a.rows()) + " is not positive definite");
}

CMatrix lower_solve(const CMatrix& lower, const CMatrix& rhs) {
    return lower.triangularView<Eigen::Lower>().solve(rhs);
}

CMatrix lower_adjoint_solve(const CMatrix& lower, const CMatrix& rhs) {
    return lower.adjoint().triangularView<Eigen::Upper>().solve(rhs);
}

double condition_number(const CMatrix& hermitian) {
    const RVector values = hermitian_eig(hermitian).values;
    const double lo = values(0);
    const double hi = values(values.size() - 1);
    if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
    return hi / lo;
}

CMatrix solve_hermitian(const CMatrix& a, const CMatrix& b) {
    require_square(a, "solve_hermitian");
    require(b.rows() == a.rows(), "solve_hermitian: right-hand side has wrong row count");
    const double cond = condition_number(a);
    if (!(cond <= kConditionCap))
        throw NumericalError("solve_hermitian: matrix is singular or ill-conditioned (cond=" +
                             std::to_string(cond) + ")");
    const CMatrix lower = cholesky_factor(a, false);
    return lower_adjoint_solve(lower, lower_solve(lower, b));
}

CMatrix orthonormal_basis(const CMatrix& b) {
    require(b.rows() > 0 && b.cols() > 0 && b.rows() >= b.cols(),
            "orthonormal_basis: expected a tall non-empty matrix");
    const CMatrix gram = b.adjoint() * b;
    const double cond = condition_number(gram);
    if (!(cond <= kConditionCap))
        throw NumericalError("orthonormal_basis: matrix is rank-deficient (cond=" +
                             std::to_string(cond) + ")");
    const CMatrix lower = cholesky_factor(gram, false);
    // b * lower^-H
    return lower_solve(lower, b.adjoint()).adjoint();
}

Projectors projectors(const CMatrix& b) {
    const CMatrix basis = orthonormal_basis(b);
    Projectors out;
    out.range = basis * basis.adjoint();
    out.complement = CMatrix::Identity(b.rows(), b.rows()) - out.range;
    return out;
}

TraceInverseBasis trace_inverse_basis(const CMatrix& a) {
    require_square(a, "trace_inverse_basis");
    HermitianEig eig = hermitian_eig(a);
    if (!(eig.values(0) > 0.0))
        throw NumericalError("trace_inverse_basis: matrix is not positive definite");
    const double cond = eig.values(eig.values.size() - 1) / eig.values(0);
    if (!(cond <= kConditionCap))
        throw NumericalError("trace_inverse_basis: matrix is ill-conditioned");
    TraceInverseBasis out;
    out.objective = eig.values.cwiseInverse().sum();
    out.values = std::move(eig.values);
    out.vectors = std::move(eig.vectors);
    return out;
}

}  // namespace adaf::linalg
