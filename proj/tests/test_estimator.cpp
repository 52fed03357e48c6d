// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adaf/baseline.hpp"
#include "adaf/estimator.hpp"
#include "adaf/signal.hpp"

#include <cmath>
#include <vector>

using namespace adaf;

namespace {

struct Scene {
    ArrayGeometry geom;
    FrameConfig frame;
    std::vector<double> cfos;
    std::vector<double> aoas;
    UplinkFrame uplink;
    std::vector<ChannelRealization> channels;
    std::vector<CMatrix> received;
};

Scene make_scene(int antennas, std::vector<double> cfos, std::vector<double> aoas_deg, double noise_var,
                 unsigned seed) {
    Scene s;
    s.geom = make_geometry(antennas);
    s.cfos = std::move(cfos);
    for (double d : aoas_deg) s.aoas.push_back(deg2rad(d));
    Rng rng(seed);
    s.uplink = draw_frame(s.frame, s.cfos, rng);
    for (double th : s.aoas)
        s.channels.push_back(draw_channel(s.geom, {th, deg2rad(10), 50}, uniform_pdp(s.frame.taps), rng));
    s.received = synthesize_received(s.uplink, s.channels, noise_var, rng);
    return s;
}

CMatrix reference_complement(const CMatrix& b) {
    const CMatrix gram = b.adjoint() * b;
    return CMatrix::Identity(b.rows(), b.rows()) - b * gram.inverse() * b.adjoint();
}

double reference_cost(const Scene& s, int user, double phi) {
    const AcmMatrix acm = acm_for_user(s.geom, s.aoas[user], deg2rad(10));
    const CMatrix z = s.received[0] * acm.u.conjugate();
    const CMatrix perp = reference_complement(s.uplink.users[user].blocks[0]);
    const CMatrix r = perp * cfo_rotation(s.frame.subcarriers, phi).adjoint() * z;
    const CMatrix xi = r.adjoint() * r;
    return (xi.inverse() * (z.adjoint() * z)).trace().real();
}

AdafProblem problem_for(const Scene& s, int user) {
    return AdafProblem(s.received[0], s.uplink.users[user].blocks[0],
                       acm_for_user(s.geom, s.aoas[user], deg2rad(10)));
}

}  // namespace

TEST_CASE("cached matrices match direct formulas") {
    const Scene s = make_scene(32, {0.12, -0.2}, {60, 115}, 0.01, 1);
    const AdafProblem p = problem_for(s, 0);
    const CMatrix z = s.received[0] * p.acm().u.conjugate();
    CHECK((p.beamspace() - z).norm() < 1e-12 * z.norm());
    CHECK((psi_matrix(p) - z.adjoint() * z).norm() < 1e-10 * z.squaredNorm());
    CHECK((p.psi_factor() * p.psi_factor().adjoint() - p.psi()).norm() < 1e-9 * p.psi().norm());

    const CMatrix perp = reference_complement(s.uplink.users[0].blocks[0]);
    for (double phi : {-0.3, 0.0, 0.12, 0.41}) {
        const CMatrix r = perp * cfo_rotation(s.frame.subcarriers, phi).adjoint() * z;
        CHECK((p.projected(phi) - r).norm() < 1e-10 * z.norm());
        CHECK((xi_matrix(p, phi) - r.adjoint() * r).norm() < 1e-9 * z.squaredNorm());
        CHECK(sinr_cost(p, phi) == doctest::Approx(reference_cost(s, 0, phi)).epsilon(1e-8));
    }
}

TEST_CASE("cost is bounded below by the branch count") {
    const Scene s = make_scene(32, {0.05, 0.3}, {70, 120}, 0.1, 2);
    const AdafProblem p = problem_for(s, 1);
    for (int i = -49; i <= 49; ++i) CHECK(sinr_cost(p, i * 0.01) >= p.branches() - 1e-9);
}

TEST_CASE("cost is invariant to scaling and equivariant to a common rotation") {
    const Scene s = make_scene(32, {0.1}, {80}, 0.05, 3);
    const AcmMatrix acm = acm_for_user(s.geom, s.aoas[0], deg2rad(10));
    const CMatrix& b = s.uplink.users[0].blocks[0];
    const AdafProblem p(s.received[0], b, acm);
    const AdafProblem scaled(cd(3.0, -2.0) * s.received[0], b, acm);
    const double delta = 0.07;
    const AdafProblem rotated(cfo_rotation(s.frame.subcarriers, delta) * s.received[0], b, acm);
    for (double phi : {-0.2, 0.03, 0.1, 0.33}) {
        CHECK(sinr_cost(scaled, phi) == doctest::Approx(sinr_cost(p, phi)).epsilon(1e-9));
        CHECK(sinr_cost(rotated, phi + delta) == doctest::Approx(sinr_cost(p, phi)).epsilon(1e-9));
    }
}

TEST_CASE("coarse search returns the first maximizer of the grid") {
    const Scene s = make_scene(32, {0.173, -0.06}, {65, 110}, 0.05, 4);
    const AdafProblem p = problem_for(s, 0);
    double best = -1.0, arg = 0.0;
    for (int i = -49; i <= 49; ++i) {
        const double phi = i * 0.01;
        const double c = sinr_cost(p, phi);
        if (c > best) {
            best = c;
            arg = phi;
        }
    }
    CHECK(coarse_cfo_search(p, 0.01) == doctest::Approx(arg).epsilon(1e-12));
    CHECK(std::abs(arg - 0.173) <= 0.01);
    CHECK_THROWS_AS(coarse_cfo_search(p, 0.0), InvalidInput);
}

TEST_CASE("refinement reaches the local maximum of the cost") {
    const Scene s = make_scene(32, {0.173, -0.06}, {65, 110}, 0.05, 5);
    const AdafProblem p = problem_for(s, 0);
    const double phi0 = coarse_cfo_search(p, 0.01);
    const NewtonResult nr = newton_refine(p, phi0, {});
    double dense_arg = phi0, dense_best = sinr_cost(p, phi0);
    for (int i = -2000; i <= 2000; ++i) {
        const double phi = phi0 + i * 5e-6;
        const double c = sinr_cost(p, phi);
        if (c > dense_best) {
            dense_best = c;
            dense_arg = phi;
        }
    }
    CHECK(std::abs(nr.phi - dense_arg) <= 1e-5);
    CHECK(sinr_cost(p, nr.phi) >= sinr_cost(p, phi0));
    CHECK(std::abs(nr.phi - phi0) <= 0.01 + 1e-12);
}

TEST_CASE("branch solution invariants") {
    const Scene s = make_scene(64, {0.2, -0.11, 0.02}, {60, 90, 120}, 0.02, 6);
    const AdafProblem p = problem_for(s, 1);
    const AdafSolution sol = estimate(s.received[0], s.uplink.users[1].blocks[0], p.acm());
    const int q = p.branches();
    const CMatrix xi = xi_matrix(p, sol.phi_hat);
    CHECK((sol.gamma.adjoint() * p.psi() * sol.gamma - CMatrix::Identity(q, q)).norm() < 1e-8);
    CMatrix lam = sol.lambda.cast<cd>().asDiagonal();
    CHECK((sol.gamma.adjoint() * xi * sol.gamma - lam).norm() < 1e-8);
    for (int i = 1; i < q; ++i) CHECK(sol.lambda(i) >= sol.lambda(i - 1));
    CHECK(sol.lambda.maxCoeff() <= 1.0 + 1e-9);
    CHECK(sol.lambda.minCoeff() > 0.0);
    CHECK(sol.cost_trace == doctest::Approx(sinr_cost(p, sol.phi_hat)).epsilon(1e-9));
    CHECK(sol.cost_trace == doctest::Approx(sol.lambda.cwiseInverse().sum()).epsilon(1e-12));
    for (int c = 0; c < q; ++c) {
        CHECK(sol.alpha(c) == doctest::Approx(1.0 / std::sqrt(sol.lambda(c))));
        CHECK(std::abs(sol.beta.col(c).norm() - 1.0) < 1e-10);
        CHECK((sol.omega.col(c) - sol.alpha(c) * p.acm().u.conjugate() * sol.gamma.col(c)).norm() < 1e-10);
        // residual energy after projecting out the pilot is unit for every branch
        const CVector r = p.projected(sol.phi_hat) * sol.gamma.col(c) * sol.alpha(c);
        CHECK(r.squaredNorm() == doctest::Approx(1.0).epsilon(1e-8));
    }
    CHECK(std::abs(sol.phi_hat - 0.2 * 0 - (-0.11)) < 2e-3);
}

TEST_CASE("near noise-free single user estimate is accurate") {
    for (double cfo : {-0.41, -0.137, 0.0, 0.058, 0.3}) {
        const Scene s = make_scene(32, {cfo}, {75}, 1e-8, 7);
        const AdafProblem p = problem_for(s, 0);
        const AdafSolution sol = estimate(s.received[0], s.uplink.users[0].blocks[0], p.acm());
        CHECK(std::abs(sol.phi_hat - cfo) < 1e-5);
    }
}

TEST_CASE("matched-filter cost is the diagonal form") {
    const Scene s = make_scene(32, {0.1, -0.25}, {70, 100}, 0.05, 8);
    const AdafProblem p = problem_for(s, 0);
    for (double phi : {-0.3, 0.0, 0.1}) {
        const CMatrix xi = xi_matrix(p, phi);
        double expected = 0.0;
        for (int q = 0; q < p.branches(); ++q) expected += p.psi()(q, q).real() / xi(q, q).real();
        CHECK(sinr_cost(p, phi, CostKind::matched_filter) == doctest::Approx(expected).epsilon(1e-10));
        CHECK(sinr_cost(p, phi, CostKind::adaptive) >= expected - 1e-9);
    }
    const AdafSolution mf = mf_baseline_estimate(s.received[0], s.uplink.users[0].blocks[0], p.acm(), {});
    CHECK((mf.omega - p.acm().u.conjugate()).norm() < 1e-12);
    CHECK(mf.cost_trace == doctest::Approx(sinr_cost(p, mf.phi_hat, CostKind::matched_filter)).epsilon(1e-9));
    CHECK(std::abs(mf.phi_hat - 0.1) < 0.01);
}

TEST_CASE("shape mismatches are rejected") {
    const Scene s = make_scene(32, {0.1}, {80}, 0.05, 9);
    const AcmMatrix acm = acm_for_user(s.geom, s.aoas[0], deg2rad(10));
    CHECK_THROWS_AS(AdafProblem(s.received[0].topRows(32), s.uplink.users[0].blocks[0], acm), InvalidInput);
    const AcmMatrix wrong = acm_for_user(make_geometry(16), s.aoas[0], deg2rad(10));
    CHECK_THROWS_AS(AdafProblem(s.received[0], s.uplink.users[0].blocks[0], wrong), InvalidInput);
}

TEST_CASE("simple matrix facts") {
    const Scene s = make_scene(32, {0.1, -0.3}, {70, 110}, 0.01, 10);
    const AdafProblem p = problem_for(s, 0);
    double col_sum = 0.0;
    for (int q = 0; q < p.branches(); ++q) col_sum += (s.received[0] * p.acm().u.col(q).conjugate()).squaredNorm();
    CHECK(p.psi().trace().real() == doctest::Approx(col_sum).epsilon(1e-10));
    CHECK((p.psi() - p.psi().adjoint()).norm() <= 1e-10 * p.psi().norm());
    for (double phi : {-0.4, 0.1, 0.25}) CHECK(xi_matrix(p, phi).trace().real() <= p.psi().trace().real());

    const AdafProblem zero(CMatrix::Zero(64, 32), s.uplink.users[0].blocks[0], p.acm());
    CHECK(psi_matrix(zero).norm() == 0.0);
}

TEST_CASE("noise-free residual vanishes at the true offset") {
    const Scene s = make_scene(16, {0.21}, {90}, 0.0, 11);
    const AdafProblem p(s.received[0], s.uplink.users[0].blocks[0], acm_for_user(s.geom, s.aoas[0], deg2rad(10)));
    CHECK(xi_matrix(p, 0.21).norm() <= 1e-12 * p.psi().norm());
    CHECK_THROWS_AS(sinr_cost(p, 0.21), NumericalError);
}

TEST_CASE("single-branch solution is a scalar normalization") {
    const Scene s = make_scene(16, {0.05}, {90}, 0.01, 12);
    const AcmMatrix one = build_acm(s.geom, std::vector<double>{kPi / 2});
    const AdafProblem p(s.received[0], s.uplink.users[0].blocks[0], one);
    const AdafSolution sol = branch_solution(p, 0.05);
    REQUIRE(sol.gamma.size() == 1);
    CHECK(std::abs(sol.gamma(0, 0)) == doctest::Approx(1.0 / std::sqrt(p.psi()(0, 0).real())));
    CHECK(std::abs(sol.beta(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("estimate is unchanged by scaling the observation") {
    const Scene s = make_scene(32, {0.137, -0.2}, {75, 100}, 0.05, 13);
    const AcmMatrix acm = acm_for_user(s.geom, s.aoas[0], deg2rad(10));
    const double a = estimate(s.received[0], s.uplink.users[0].blocks[0], acm).phi_hat;
    const double b = estimate(4.5 * s.received[0], s.uplink.users[0].blocks[0], acm).phi_hat;
    CHECK(std::abs(a - b) <= 1e-9);
}

TEST_CASE("dense-grid maximizer lies close to the true offset") {
    const Scene s = make_scene(64, {0.083}, {80}, 0.01, 14);
    const AdafProblem p = problem_for(s, 0);
    double best = -1.0, arg = 0.0;
    for (int i = -499; i <= 499; ++i) {
        const double c = sinr_cost(p, i * 0.001);
        if (c > best) {
            best = c;
            arg = i * 0.001;
        }
    }
    CHECK(std::abs(arg - 0.083) <= 0.005);
}

TEST_CASE("refinement moves toward the fine-grid maximizer") {
    int closer = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        Rng rng(1000 + t);
        std::uniform_real_distribution<double> cfo(-0.2, 0.2);
        const Scene s = make_scene(64, {cfo(rng)}, {90}, 0.1, 2000 + t);
        const AdafProblem p = problem_for(s, 0);
        const double phi0 = coarse_cfo_search(p, 0.01);
        const double refined = newton_refine(p, phi0, {}).phi;
        double best = -1.0, arg = phi0;
        for (int i = -200; i <= 200; ++i) {
            const double phi = std::round(phi0 / 1e-4) * 1e-4 + i * 1e-4;
            const double c = sinr_cost(p, phi);
            if (c > best) {
                best = c;
                arg = phi;
            }
        }
        if (std::abs(refined - arg) <= std::abs(phi0 - arg) + 1e-12) ++closer;
    }
    CHECK(closer >= 190);
}

TEST_CASE("two overlapping users are resolved with a large array") {
    double se = 0.0;
    int count = 0;
    for (int t = 0; t < 200; ++t) {
        Rng rng(5000 + t);
        std::uniform_real_distribution<double> cfo(-0.2, 0.2);
        const std::vector<double> cfos{cfo(rng), cfo(rng)};
        const Scene s = make_scene(128, cfos, {70, 75}, 0.01, 6000 + t);
        for (int k = 0; k < 2; ++k) {
            const AdafProblem p = problem_for(s, k);
            const double phi = estimate(s.received[0], s.uplink.users[k].blocks[0], p.acm()).phi_hat;
            se += (phi - cfos[k]) * (phi - cfos[k]);
            ++count;
        }
    }
    CHECK(se / count < 1e-5);
}
