// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/channel.hpp"

#include <span>
#include <vector>

namespace adaf {

// Angle-domain beam selection for one user: Q columns a(angle)/sqrt(M)
// drawn from the orthogonal DFT grid.
struct AcmMatrix {
    CMatrix u;                  // M x Q
    std::vector<double> angles;  // radians, ascending

    int branches() const { return static_cast<int>(u.cols()); }
    int antennas() const { return static_cast<int>(u.rows()); }
};

// Grid directions whose steering vectors are the DFT columns, ascending.
// Requires an even antenna count and spacing of at most half a wavelength.
// At exactly half a wavelength both endfire directions map to the same DFT
// column; only angle 0 is kept, leaving M entries.
std::vector<double> dft_angle_grid(const ArrayGeometry& geom);

// Grid angles strictly within +-spread of theta_k. Throws when none qualify.
std::vector<double> select_angles(std::span<const double> grid, double theta_k, double spread);

AcmMatrix build_acm(const ArrayGeometry& geom, std::span<const double> angles);

// Grid, selection and construction in one step.
AcmMatrix acm_for_user(const ArrayGeometry& geom, double theta_k, double spread);

// Beam count suggested by the region width at half-wavelength spacing:
// M sin(theta_k) sin(spread).
double continuous_qk(int antennas, double theta_k, double spread);

}  // namespace adaf
