// SPDX-License-Identifier: Apache-2.0
#include "adaf/acm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace adaf {

std::vector<double> dft_angle_grid(const ArrayGeometry& geom) {
    require(geom.antennas >= 2 && geom.antennas % 2 == 0, "angle grid needs an even antenna count");
    require(geom.spacing > 0.0 && geom.spacing <= 0.5, "angle grid needs spacing in (0, 0.5]");
    const int m = geom.antennas;
    const double half = 0.5 * m;
    const double reach = geom.spacing * m;  // |i - M/2| <= reach keeps |cos| <= 1
    const int lo = static_cast<int>(std::ceil(half - reach - 1e-9));
    const int hi = static_cast<int>(std::floor(half + reach + 1e-9));

    std::vector<double> grid;
    std::set<int> classes;
    for (int i = hi; i >= lo; --i) {
        const int cls = ((i % m) + m) % m;
        if (!classes.insert(cls).second) continue;
        const double c = std::clamp(kPi * (i - half) / (geom.chi() * m), -1.0, 1.0);
        grid.push_back(std::acos(c));
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::vector<double> select_angles(std::span<const double> grid, double theta_k, double spread) {
    require(spread > 0.0, "angular spread must be positive");
    std::vector<double> out;
    for (double g : grid)
        if (std::abs(g - theta_k) < spread) out.push_back(g);
    std::sort(out.begin(), out.end());
    if (out.empty())
        throw InvalidInput("no beam direction falls inside the user's angular region");
    return out;
}

AcmMatrix build_acm(const ArrayGeometry& geom, std::span<const double> angles) {
    require(!angles.empty(), "beam set is empty");
    AcmMatrix acm;
    acm.angles.assign(angles.begin(), angles.end());
    std::sort(acm.angles.begin(), acm.angles.end());
    require(std::adjacent_find(acm.angles.begin(), acm.angles.end()) == acm.angles.end(),
            "beam set contains duplicate angles");
    acm.u.resize(geom.antennas, static_cast<Eigen::Index>(acm.angles.size()));
    const double scale = 1.0 / std::sqrt(static_cast<double>(geom.antennas));
    for (std::size_t q = 0; q < acm.angles.size(); ++q)
        acm.u.col(static_cast<Eigen::Index>(q)) =
            scale * steering_vector_from_cosine(geom, std::cos(acm.angles[q]));
    return acm;
}

AcmMatrix acm_for_user(const ArrayGeometry& geom, double theta_k, double spread) {
    const auto grid = dft_angle_grid(geom);
    const auto chosen = select_angles(grid, theta_k, spread);
    return build_acm(geom, chosen);
}

double continuous_qk(int antennas, double theta_k, double spread) {
    return antennas * std::sin(theta_k) * std::sin(spread);
}

}  // namespace adaf
