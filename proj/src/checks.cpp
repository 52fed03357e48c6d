// SPDX-License-Identifier: Apache-2.0
#include "adaf/checks.hpp"

#include "adaf/acm.hpp"
#include "adaf/analysis.hpp"
#include "adaf/channel.hpp"
#include "adaf/estimator.hpp"
#include "adaf/numkernel.hpp"
#include "adaf/signal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adaf {
namespace {

CMatrix gaussian(int rows, int cols, Rng& rng) {
    CMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = complex_normal(rng);
    return g;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

}  // namespace

CMatrix random_unitary(int dim, Rng& rng) {
    const CMatrix g = gaussian(dim, dim, rng);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const cd d = r(i, i);
        if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

CheckOutcome check_branch_optimality(std::uint64_t seed, int matrices, int unitaries, int max_dim) {
    Rng rng(seed);
    CheckOutcome out{"branch-optimality", true, 0.0, ""};
    std::uniform_int_distribution<int> dim_dist(1, max_dim);
    for (int t = 0; t < matrices; ++t) {
        const int dim = dim_dist(rng);
        const CMatrix g = gaussian(dim, dim, rng);
        CMatrix a = g.adjoint() * g;
        a.diagonal().array() += 0.1;
        const linalg::TraceInverseBasis best = linalg::trace_inverse_basis(a);
        const double trace_inv =
            linalg::solve_hermitian(a, CMatrix::Identity(dim, dim)).trace().real();
        out.worst = std::max(out.worst, std::abs(best.objective - trace_inv) / trace_inv);
        double at_vectors = 0.0;
        for (int q = 0; q < dim; ++q)
            at_vectors += 1.0 / (best.vectors.col(q).adjoint() * a * best.vectors.col(q))(0).real();
        out.worst = std::max(out.worst, std::abs(at_vectors - best.objective) / best.objective);
        for (int u = 0; u < unitaries; ++u) {
            const CMatrix y = random_unitary(dim, rng);
            const CMatrix ay = a * y;
            double obj = 0.0;
            for (int q = 0; q < dim; ++q) obj += 1.0 / y.col(q).dot(ay.col(q)).real();
            if (obj > best.objective * (1.0 + 1e-9)) {
                out.passed = false;
                out.detail = "random unitary beat the eigenvector objective";
            }
        }
    }
    if (out.worst > 1e-9) out.passed = false;
    if (out.detail.empty()) out.detail = "max relative deviation " + fmt(out.worst);
    return out;
}

CheckOutcome check_g3_identity(std::uint64_t seed, int scenarios) {
    Rng rng(seed);
    CheckOutcome out{"g3-identity", true, 0.0, ""};
    std::uniform_real_distribution<double> aoa(30.0, 150.0);
    std::uniform_real_distribution<double> snr(0.0, 30.0);
    const int sizes[] = {16, 32, 64};
    for (int s = 0; s < scenarios; ++s) {
        const ArrayGeometry geom = make_geometry(sizes[s % 3]);
        const double spread = deg2rad(10.0);
        const double own_aoa = deg2rad(aoa(rng));
        const CMatrix own = angular_correlation(geom, own_aoa, spread);
        CMatrix pi2 = CMatrix::Zero(geom.antennas, geom.antennas);
        for (int k = 0; k < 1 + s % 4; ++k) pi2 += angular_correlation(geom, deg2rad(aoa(rng)), spread);
        const AcmMatrix acm = acm_for_user(geom, own_aoa, spread);
        const double s2 = std::pow(10.0, -snr(rng) / 10.0);
        const int n = 64, l = 10;
        const MseIngredients ing = mse_ingredients(acm, pi2, own, s2, n, l, 1.0);
        const double direct = (ing.r_script * own * ing.r_script * pi2).trace().real();
        const double rel = std::abs(direct - ing.g3) / std::max(std::abs(direct), 1e-300);
        out.worst = std::max(out.worst, rel);
    }
    out.passed = out.worst <= 1e-8;
    out.detail = "max relative deviation " + fmt(out.worst);
    return out;
}

CheckOutcome check_noise_trace_moment(std::uint64_t seed, int pairs, int draws) {
    Rng rng(seed);
    CheckOutcome out{"noise-trace-moment", true, 0.0, ""};
    const int r = 4, n = 8, m = 6;
    const double s2 = 0.5;
    for (int p = 0; p < pairs; ++p) {
        const CMatrix a = gaussian(r, n, rng);
        const CMatrix c = gaussian(m, r, rng);
        const double expected = s2 * (a * a.adjoint() * c.adjoint() * c).trace().real();
        // tr(A N C) = sum_{n,m} N_nm (C A)_mn
        const CMatrix ca = c * a;
        double acc = 0.0;
        for (int d = 0; d < draws; ++d) {
            cd t = 0.0;
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < n; ++i) t += complex_normal(rng, s2) * ca(j, i);
            acc += std::norm(t);
        }
        const double rel = std::abs(acc / draws - expected) / expected;
        out.worst = std::max(out.worst, rel);
    }
    out.passed = out.worst <= 0.05;
    out.detail = "max relative deviation " + fmt(out.worst);
    return out;
}

CheckOutcome check_cost_shift(std::uint64_t seed, int instances) {
    Rng rng(seed);
    CheckOutcome out{"cost-shift", true, 0.0, ""};
    std::uniform_real_distribution<double> shift(-0.1, 0.1);
    std::uniform_real_distribution<double> trial(-0.3, 0.3);
    std::uniform_real_distribution<double> aoa(40.0, 140.0);
    const int n = 64, l = 10;
    for (int s = 0; s < instances; ++s) {
        const ArrayGeometry geom = make_geometry(32);
        const double theta = deg2rad(aoa(rng));
        const AcmMatrix acm = acm_for_user(geom, theta, deg2rad(10.0));
        const ChannelRealization ch = draw_channel(geom, {theta, deg2rad(10.0), 20}, uniform_pdp(l), rng);
        const CMatrix b = build_pilot_matrix(draw_symbols(Constellation::qpsk, n, rng), l);
        CMatrix y = cfo_rotation(n, trial(rng)) * b * ch.h;
        for (int j = 0; j < y.cols(); ++j)
            for (int i = 0; i < n; ++i) y(i, j) += complex_normal(rng, 0.05);
        const double delta = shift(rng);
        const double phi = trial(rng);
        const AdafProblem base(y, b, acm);
        const AdafProblem shifted(cfo_rotation(n, delta) * y, b, acm);
        const double g0 = sinr_cost(base, phi - delta);
        const double g1 = sinr_cost(shifted, phi);
        out.worst = std::max(out.worst, std::abs(g1 - g0) / std::abs(g0));
    }
    out.passed = out.worst <= 1e-9;
    out.detail = "max relative deviation " + fmt(out.worst);
    return out;
}

std::vector<CheckOutcome> run_all_checks(std::uint64_t seed) {
    return {check_branch_optimality(seed), check_g3_identity(seed + 1),
            check_noise_trace_moment(seed + 2), check_cost_shift(seed + 3)};
}

}  // namespace adaf
