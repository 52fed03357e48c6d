// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adaf/channel.hpp"

#include <cmath>

using namespace adaf;

TEST_CASE("steering vector values") {
    const ArrayGeometry g4 = make_geometry(4);
    const CVector broadside = steering_vector(g4, kPi / 2);
    for (int m = 0; m < 4; ++m) CHECK(std::abs(broadside(m) - cd(1.0, 0.0)) < 1e-15);

    const CVector endfire = steering_vector_from_cosine(make_geometry(2), 1.0);
    CHECK(std::abs(endfire(0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(endfire(1) - cd(-1.0, 0.0)) < 1e-15);
    // approaching endfire from inside the open interval
    CHECK(std::abs(steering_vector(make_geometry(2), 1e-9)(1) - cd(-1.0, 0.0)) < 1e-12);

    const CVector a = steering_vector(g4, kPi / 3);
    for (int m = 0; m < 4; ++m) {
        CHECK(std::abs(a(m) - std::polar(1.0, -kPi * m * 0.5)) < 1e-14);
        CHECK(std::abs(a(m)) == doctest::Approx(1.0));
    }
    CHECK(a.squaredNorm() == doctest::Approx(4.0));

    CHECK_THROWS_AS(steering_vector(g4, 0.0), InvalidInput);
    CHECK_THROWS_AS(steering_vector(g4, kPi), InvalidInput);
    CHECK_THROWS_AS(steering_vector(g4, -0.1), InvalidInput);
}

TEST_CASE("steering vectors of distinct directions decorrelate for large arrays") {
    const ArrayGeometry g = make_geometry(256);
    const cd inner = steering_vector(g, deg2rad(60)).dot(steering_vector(g, deg2rad(120)));
    CHECK(std::abs(inner) / 256.0 <= 0.05);
}

TEST_CASE("channel rows are sums of weighted steering vectors") {
    Rng rng(1);
    const ArrayGeometry g = make_geometry(64);
    const ClusterSpec c{deg2rad(70), deg2rad(10), 50};
    const ChannelRealization ch = draw_channel(g, c, uniform_pdp(10), rng);
    CHECK(ch.h.rows() == 10);
    CHECK(ch.h.cols() == 64);
    CHECK(ch.pdp.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (int l = 0; l < 10; ++l) {
        CVector row = CVector::Zero(64);
        for (int p = 0; p < 50; ++p) {
            const double th = ch.angles(l, p);
            CHECK(std::abs(th - c.mean_aoa) < c.angular_spread);
            row += ch.gains(l, p) * steering_vector(g, th);
        }
        CHECK((row.transpose() - ch.h.row(l)).norm() <= 1e-12 * std::max(1.0, row.norm()));
    }
}

TEST_CASE("single-ray channel is aligned with the mean direction") {
    Rng rng(2);
    const ArrayGeometry g = make_geometry(16);
    const double theta = deg2rad(80);
    const ChannelRealization ch = draw_channel(g, {theta, 1e-12, 1}, uniform_pdp(3), rng);
    const CVector a = steering_vector(g, theta);
    for (int l = 0; l < 3; ++l) {
        const double corr = std::abs((ch.h.row(l) * a.conjugate())(0));
        CHECK(corr == doctest::Approx(ch.h.row(l).norm() * std::sqrt(16.0)).epsilon(1e-9));
    }
}

TEST_CASE("tap power matches the delay profile on average") {
    Rng rng(3);
    const ArrayGeometry g = make_geometry(8);
    RVector pdp(3);
    pdp << 0.5, 0.3, 0.2;
    const int draws = 10000;
    RVector sum = RVector::Zero(3), sum_sq = RVector::Zero(3);
    for (int d = 0; d < draws; ++d) {
        const ChannelRealization ch = draw_channel(g, {deg2rad(100), deg2rad(10), 20}, pdp, rng);
        for (int l = 0; l < 3; ++l) {
            const double v = ch.h.row(l).squaredNorm() / 8.0;
            sum(l) += v;
            sum_sq(l) += v * v;
        }
    }
    for (int l = 0; l < 3; ++l) {
        const double mean = sum(l) / draws;
        const double se = std::sqrt((sum_sq(l) / draws - mean * mean) / draws);
        CHECK(std::abs(mean - pdp(l)) <= 3.0 * se);
    }
}

TEST_CASE("invalid channel inputs") {
    Rng rng(4);
    const ArrayGeometry g = make_geometry(8);
    RVector bad(2);
    bad << 0.5, -0.1;
    CHECK_THROWS_AS(draw_channel(g, {deg2rad(90), deg2rad(10), 5}, bad, rng), InvalidInput);
    CHECK_THROWS_AS(draw_channel(g, {deg2rad(5), deg2rad(10), 5}, uniform_pdp(2), rng), InvalidInput);
    CHECK_THROWS_AS(make_geometry(0), InvalidInput);
}

TEST_CASE("composite channel") {
    Rng rng(5);
    const ArrayGeometry g = make_geometry(16);
    const ChannelRealization main = draw_channel(g, {deg2rad(60), deg2rad(10), 10}, uniform_pdp(4), rng);
    CHECK((composite_channel(main, std::nullopt).h - main.h).norm() == 0.0);

    const ChannelRealization silent =
        draw_channel(g, {deg2rad(100), deg2rad(2), 10}, uniform_pdp(4, 0.0), rng);
    CHECK((composite_channel(main, silent).h - main.h).norm() == 0.0);

    const double eta = std::pow(10.0, -0.3);
    const ChannelRealization side = draw_channel(g, {deg2rad(100), deg2rad(2), 10}, uniform_pdp(4, eta), rng);
    const ChannelRealization both = composite_channel(main, side);
    CHECK((both.h - main.h - side.h).norm() < 1e-15);
    CHECK(side.pdp.sum() == doctest::Approx(eta));
    CHECK(both.gains.cols() == 20);

    ChannelRealization scaled_main = main, scaled_side = side;
    scaled_main.h *= 2.5;
    scaled_side.h *= 2.5;
    CHECK((composite_channel(scaled_main, scaled_side).h - 2.5 * both.h).norm() < 1e-12);

    const ChannelRealization other = draw_channel(g, {deg2rad(60), deg2rad(10), 10}, uniform_pdp(3), rng);
    CHECK_THROWS_AS(composite_channel(main, other), InvalidInput);
}

TEST_CASE("angular correlation") {
    const ArrayGeometry g = make_geometry(8);
    const CMatrix r = angular_correlation(g, kPi / 2, deg2rad(10));
    CHECK(r.trace().real() == doctest::Approx(8.0).epsilon(1e-10));
    CHECK((r - r.adjoint()).norm() < 1e-14);
    const Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);

    // Monte Carlo average of conj(a) a^T over uniform angles
    Rng rng(6);
    std::uniform_real_distribution<double> th(kPi / 2 - deg2rad(10), kPi / 2 + deg2rad(10));
    CMatrix mc = CMatrix::Zero(8, 8);
    const int draws = 1000000;
    for (int d = 0; d < draws; ++d) {
        const CVector a = steering_vector(g, th(rng));
        mc.noalias() += a.conjugate() * a.transpose();
    }
    mc /= draws;
    CHECK((mc - r).cwiseAbs().maxCoeff() <= 1e-3);

    // narrow spread approaches a rank-one outer product
    const double theta = deg2rad(70);
    const CMatrix narrow = angular_correlation(g, theta, 1e-6);
    const CVector a = steering_vector(g, theta);
    CHECK((narrow - a.conjugate() * a.transpose()).norm() < 1e-6);

    CHECK_THROWS_AS(angular_correlation(g, deg2rad(175), deg2rad(10)), InvalidInput);
}

TEST_CASE("sample covariance of channels approaches the angular correlation") {
    Rng rng(7);
    const ArrayGeometry g = make_geometry(16);
    const double theta = deg2rad(110);
    const CMatrix r = angular_correlation(g, theta, deg2rad(10));
    CMatrix acc = CMatrix::Zero(16, 16);
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
        const ChannelRealization ch = draw_channel(g, {theta, deg2rad(10), 50}, uniform_pdp(10), rng);
        acc.noalias() += ch.h.adjoint() * ch.h;
    }
    acc /= draws;
    CHECK((acc - r).norm() / r.norm() <= 0.05);
}
