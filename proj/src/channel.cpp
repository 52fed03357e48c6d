// SPDX-License-Identifier: Apache-2.0
#include "adaf/channel.hpp"

#include <array>
#include <cmath>
#include <string>

namespace adaf {
namespace {

void check_geometry(const ArrayGeometry& geom) {
    require(geom.antennas >= 1, "array needs at least one antenna");
    require(geom.spacing > 0.0 && std::isfinite(geom.spacing), "element spacing must be positive");
}

void check_cluster(const ClusterSpec& c) {
    require(c.angular_spread > 0.0, "angular spread must be positive");
    require(c.subpaths >= 1, "cluster needs at least one subpath");
    require(c.mean_aoa - c.angular_spread > 0.0 && c.mean_aoa + c.angular_spread < kPi,
            "cluster angular region must lie inside (0, pi)");
}

// 20-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration.
struct GaussLegendre20 {
    std::array<double, 20> nodes{};
    std::array<double, 20> weights{};

    GaussLegendre20() {
        constexpr int n = 20;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre20& gl20() {
    static const GaussLegendre20 rule;
    return rule;
}

}  // namespace

ArrayGeometry make_geometry(int antennas, double spacing) {
    ArrayGeometry g{antennas, spacing};
    check_geometry(g);
    return g;
}

CVector steering_vector_from_cosine(const ArrayGeometry& geom, double cos_theta) {
    check_geometry(geom);
    require(cos_theta >= -1.0 && cos_theta <= 1.0, "cosine of angle must lie in [-1, 1]");
    CVector a(geom.antennas);
    const double step = -2.0 * geom.chi() * cos_theta;
    for (int m = 0; m < geom.antennas; ++m) a(m) = std::polar(1.0, step * m);
    return a;
}

CVector steering_vector(const ArrayGeometry& geom, double theta) {
    require(theta > 0.0 && theta < kPi, "steering angle must lie in (0, pi)");
    return steering_vector_from_cosine(geom, std::cos(theta));
}

RVector uniform_pdp(int taps, double total_power) {
    require(taps >= 1, "need at least one tap");
    require(total_power >= 0.0, "cluster power must be non-negative");
    return RVector::Constant(taps, total_power / taps);
}

ChannelRealization draw_channel(const ArrayGeometry& geom, const ClusterSpec& cluster,
                                const RVector& pdp, Rng& rng) {
    check_geometry(geom);
    check_cluster(cluster);
    require(pdp.size() >= 1, "power delay profile is empty");
    require((pdp.array() >= 0.0).all(), "power delay profile must be non-negative");

    const Eigen::Index taps = pdp.size();
    const int paths = cluster.subpaths;
    const int antennas = geom.antennas;
    std::uniform_real_distribution<double> aoa(cluster.mean_aoa - cluster.angular_spread,
                                               cluster.mean_aoa + cluster.angular_spread);

    ChannelRealization out;
    out.pdp = pdp;
    out.gains.resize(taps, paths);
    out.angles.resize(taps, paths);
    out.h = CMatrix::Zero(taps, antennas);

    for (Eigen::Index l = 0; l < taps; ++l) {
        const double var = pdp(l) / paths;
        for (int p = 0; p < paths; ++p) {
            const double theta = aoa(rng);
            const cd g = complex_normal(rng, var);
            out.angles(l, p) = theta;
            out.gains(l, p) = g;
            // accumulate g * a(theta) with a phasor recursion, refreshed every
            // 32 elements to keep rounding drift negligible
            const double step = -2.0 * geom.chi() * std::cos(theta);
            const cd rot = std::polar(1.0, step);
            cd term = g;
            for (int m = 0; m < antennas; ++m) {
                if (m % 32 == 0) term = g * std::polar(1.0, step * m);
                out.h(l, m) += term;
                term *= rot;
            }
        }
    }
    return out;
}

ChannelRealization composite_channel(const ChannelRealization& main,
                                     const std::optional<ChannelRealization>& side) {
    if (!side) return main;
    require(side->h.rows() == main.h.rows() && side->h.cols() == main.h.cols(),
            "side cluster channel shape differs from the main channel");
    ChannelRealization out;
    out.h = main.h + side->h;
    out.pdp = main.pdp + side->pdp;
    const Eigen::Index taps = main.h.rows();
    const Eigen::Index p1 = main.gains.cols();
    const Eigen::Index p2 = side->gains.cols();
    out.gains.resize(taps, p1 + p2);
    out.angles.resize(taps, p1 + p2);
    out.gains << main.gains, side->gains;
    out.angles << main.angles, side->angles;
    return out;
}

CMatrix angular_correlation(const ArrayGeometry& geom, double theta_k, double spread) {
    check_geometry(geom);
    check_cluster(ClusterSpec{theta_k, spread, 1});

    // Composite rule: panels of at most 0.1 degree, 20 nodes each.
    const double width = 2.0 * spread;
    const int panels = std::max(1, static_cast<int>(std::ceil(width / deg2rad(0.1))));
    const double h = width / panels;
    const auto& rule = gl20();
    const int antennas = geom.antennas;

    // r(d) = (1 / 2 spread) * integral exp(j 2 chi d cos(theta)) dtheta, d >= 0
    CVector lag = CVector::Zero(antennas);
    for (int p = 0; p < panels; ++p) {
        const double mid = theta_k - spread + (p + 0.5) * h;
        for (int i = 0; i < 20; ++i) {
            const double theta = mid + 0.5 * h * rule.nodes[i];
            const double w = 0.5 * h * rule.weights[i] / width;
            const double step = 2.0 * geom.chi() * std::cos(theta);
            for (int d = 0; d < antennas; ++d) lag(d) += w * std::polar(1.0, step * d);
        }
    }
    lag(0) = lag(0).real();

    CMatrix r(antennas, antennas);
    for (int m = 0; m < antennas; ++m)
        for (int n = 0; n < antennas; ++n) r(m, n) = m >= n ? lag(m - n) : std::conj(lag(n - m));
    return r;
}

}  // namespace adaf
