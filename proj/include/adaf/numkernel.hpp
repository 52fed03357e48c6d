// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/types.hpp"

namespace adaf::linalg {

// Condition numbers above this are treated as singular by the solvers.
inline constexpr double kConditionCap = 1e12;

struct HermitianEig {
    RVector values;   // ascending
    CMatrix vectors;  // column i pairs with values(i)
};

// Eigendecomposition of a Hermitian matrix. Each eigenvector is scaled so
// that its largest-magnitude entry is real and positive, which makes the
// output deterministic for simple spectra.
HermitianEig hermitian_eig(const CMatrix& a);

// Lower-triangular factor of a Hermitian positive-definite matrix. When the
// plain factorization fails and `allow_jitter` is set, one retry is made
// with 1e-12 * trace/dim added to the diagonal. Throws NumericalError naming
// the failing leading minor otherwise.
CMatrix cholesky_factor(const CMatrix& a, bool allow_jitter = true);

// Solve lower * X = rhs and lower^H * X = rhs for a Cholesky factor.
CMatrix lower_solve(const CMatrix& lower, const CMatrix& rhs);
CMatrix lower_adjoint_solve(const CMatrix& lower, const CMatrix& rhs);

// 2-norm condition number of a Hermitian matrix (inf if not positive definite).
double condition_number(const CMatrix& hermitian);

// X with A X = B for Hermitian positive-definite A.
CMatrix solve_hermitian(const CMatrix& a, const CMatrix& b);

struct Projectors {
    CMatrix range;       // B (B^H B)^-1 B^H
    CMatrix complement;  // I - range
};

Projectors projectors(const CMatrix& b);

// Columns spanning range(b) with orthonormal columns (b times the inverse
// adjoint Cholesky factor of b^H b).
CMatrix orthonormal_basis(const CMatrix& b);

struct TraceInverseBasis {
    double objective;  // tr(A^-1)
    RVector values;    // eigenvalues of A, ascending
    CMatrix vectors;   // maximizing unitary
};

// Maximum over unitary Y of sum_i 1 / (y_i^H A y_i), attained at the
// eigenvectors of A.
TraceInverseBasis trace_inverse_basis(const CMatrix& a);

bool all_finite(const CMatrix& m);

}  // namespace adaf::linalg
