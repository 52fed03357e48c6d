// SPDX-License-Identifier: Apache-2.0
#include "adaf/analysis.hpp"

#include "adaf/numkernel.hpp"

#include <cmath>
#include <string>

namespace adaf {
namespace {

// (I - P_B) D^H B, using an orthonormal basis of range(B).
CMatrix projected_derivative(const CMatrix& pilot) {
    const Eigen::Index n = pilot.rows();
    CMatrix db(n, pilot.cols());
    const double w0 = 2.0 * kPi / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) db.row(i) = cd(0.0, -w0 * static_cast<double>(i)) * pilot.row(i);
    const CMatrix basis = linalg::orthonormal_basis(pilot);
    return db - basis * (basis.adjoint() * db);
}

}  // namespace

double pilot_dk(const CMatrix& pilot) { return projected_derivative(pilot).squaredNorm(); }

double pilot_dk_trace(const CMatrix& pilot) {
    const Eigen::Index n = pilot.rows();
    const double w0 = 2.0 * kPi / static_cast<double>(n);
    CMatrix d = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = cd(0.0, w0 * static_cast<double>(i));
    const linalg::Projectors p = linalg::projectors(pilot);
    return (pilot.adjoint() * d * p.complement * d.adjoint() * pilot).trace().real();
}

double dk_large_n_limit(int subcarriers, int taps) {
    return kPi * kPi * subcarriers * taps / 3.0;
}

MseIngredients mse_ingredients(const AcmMatrix& acm, const CMatrix& interference,
                               const CMatrix& own_correlation, const CMatrix& pilot,
                               double sigma_n2) {
    require(pilot.rows() > pilot.cols(), "pilot matrix must have more rows than taps");
    return mse_ingredients(acm, interference, own_correlation, sigma_n2,
                           static_cast<int>(pilot.rows()), static_cast<int>(pilot.cols()),
                           pilot_dk(pilot));
}

MseIngredients mse_ingredients(const AcmMatrix& acm, const CMatrix& interference,
                               const CMatrix& own_correlation, double sigma_n2, int subcarriers,
                               int taps, double d_k) {
    const int m = acm.antennas();
    const int n = subcarriers;
    const int l = taps;
    require(n > l && l >= 1, "need more subcarriers than taps");
    require(d_k >= 0.0, "pilot energy term must be non-negative");
    require(sigma_n2 > 0.0, "noise variance must be positive");
    require(interference.rows() == m && interference.cols() == m, "interference matrix must be M x M");
    require(own_correlation.rows() == m && own_correlation.cols() == m,
            "own correlation matrix must be M x M");

    const CMatrix& u = acm.u;
    const CMatrix ut = u.transpose();
    const CMatrix uc = u.conjugate();
    const double nl = static_cast<double>(n - l);

    CMatrix omega = nl * interference;
    omega.diagonal().array() += nl * sigma_n2;
    const CMatrix inner = ut * omega * uc;
    const CMatrix inv = linalg::solve_hermitian(inner, CMatrix::Identity(inner.rows(), inner.cols()));

    MseIngredients ing;
    ing.r_script = uc * inv * ut;
    ing.g0 = ing.r_script.trace().real();
    const CMatrix rr = ing.r_script * own_correlation;
    ing.g1 = rr.trace().real();
    ing.g2 = (ing.r_script * rr).trace().real();
    ing.g3 = ing.g1 / nl - sigma_n2 * ing.g2;
    ing.d_k = d_k;
    ing.r_k = (ut * own_correlation * uc).trace().real();
    ing.sigma_n2 = sigma_n2;
    ing.taps = l;
    ing.subcarriers = n;
    ing.antennas = m;
    ing.branches = acm.branches();
    return ing;
}

MseIngredients beam_domain_ingredients(const CMatrix& interference_beam, const CMatrix& own_beam,
                                       double sigma_n2, int subcarriers, int taps, double d_k) {
    const auto q = interference_beam.rows();
    require(q >= 1 && interference_beam.cols() == q && own_beam.rows() == q && own_beam.cols() == q,
            "beam-domain matrices must be square and of equal size");
    require(subcarriers > taps && taps >= 1, "need more subcarriers than taps");
    require(sigma_n2 > 0.0, "noise variance must be positive");
    const double nl = static_cast<double>(subcarriers - taps);
    CMatrix inner = nl * interference_beam;
    inner.diagonal().array() += nl * sigma_n2;
    const CMatrix inv = linalg::solve_hermitian(inner, CMatrix::Identity(q, q));
    const CMatrix ia = inv * own_beam;

    MseIngredients ing;
    ing.g0 = inv.trace().real();
    ing.g1 = ia.trace().real();
    ing.g2 = (inv * ia).trace().real();
    ing.g3 = ing.g1 / nl - sigma_n2 * ing.g2;
    ing.d_k = d_k;
    ing.r_k = own_beam.trace().real();
    ing.sigma_n2 = sigma_n2;
    ing.taps = taps;
    ing.subcarriers = subcarriers;
    ing.branches = static_cast<int>(q);
    return ing;
}

double analytical_mse(const MseIngredients& ing) {
    const double l = ing.taps;
    const double s = ing.sigma_n2;
    const double d = ing.d_k;
    const double g1sq = ing.g1 * ing.g1;
    const double numerator = g1sq * ing.g3 * d / (l * l * l) + s * g1sq * ing.g2 * d / (l * l * l);
    const double inner = s * ing.g1 * ing.g2 * d / l + s * ing.g0 * g1sq * d / (l * l) - g1sq * d / (l * l);
    const double denominator = 2.0 * inner * inner;
    if (!(denominator > 0.0) || !std::isfinite(denominator))
        throw NumericalError("analytical MSE: denominator vanishes for these ingredients");
    return numerator / denominator;
}

double alpha_no_overlap(int subcarriers, int taps, int branches) {
    require(subcarriers > 2 * taps + branches, "no-overlap coefficient needs N > 2L + Q");
    const double r = static_cast<double>(subcarriers - taps) / (subcarriers - 2 * taps - branches);
    return r * r;
}

double alpha_overlap(int subcarriers, int taps, int branches) {
    require(branches > taps, "overlap coefficient needs more beams than taps");
    require(subcarriers > taps + branches, "overlap coefficient needs N > L + Q");
    const double r = static_cast<double>(subcarriers - taps) / (subcarriers - taps - branches);
    return r * r * branches / static_cast<double>(branches - taps);
}

double mse_no_overlap(int subcarriers, int taps, int branches, double sigma_n2, double theta_k,
                      double spread, double d_k) {
    require(d_k > 0.0 && sigma_n2 >= 0.0, "invalid noise level or pilot energy");
    return alpha_no_overlap(subcarriers, taps, branches) * sigma_n2 * taps * spread *
           std::sin(theta_k) / (2.0 * branches * d_k);
}

double mse_overlap_asymptotic(int subcarriers, int taps, int branches, double sigma_n2,
                              double theta_k, double spread, double d_k) {
    require(d_k > 0.0 && sigma_n2 >= 0.0, "invalid noise level or pilot energy");
    return alpha_overlap(subcarriers, taps, branches) * sigma_n2 * taps * spread *
           std::sin(theta_k) / (2.0 * branches * d_k);
}

double mse_large_limit(int antennas, int subcarriers, double sigma_n2, double spread,
                       double alpha1, bool small_spread) {
    const double base = alpha1 * 3.0 * sigma_n2 / (2.0 * kPi * kPi * antennas * subcarriers);
    return small_spread ? base : base * spread / std::sin(spread);
}

ComplexityCount adaf_complexity(int users, int subcarriers, int antennas, int taps, int branches,
                                int newton_iterations, int blocks) {
    const double k = users, n = subcarriers, m = antennas, l = taps, q = branches;
    const double eta = newton_iterations, nb = blocks;
    ComplexityCount c;
    c.cfo_ops = k * (l * (n + l) * (n + l) + eta * n * (m + 3 * n + 3 * q * q) +
                     eta * q * (n * m + 3 * n * n) + q * q * (n + 4 * eta * q));
    c.detect_ops = k * n * q * nb * (std::log2(n) + 1) + k * q * (n * l + n + 2 * q * q);
    return c;
}

}  // namespace adaf
