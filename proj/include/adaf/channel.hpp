// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/types.hpp"

#include <optional>

namespace adaf {

// Uniform linear array. `spacing` is the element spacing in wavelengths.
struct ArrayGeometry {
    int antennas = 64;
    double spacing = 0.5;

    double chi() const { return kPi * spacing; }
};

ArrayGeometry make_geometry(int antennas, double spacing = 0.5);

// Angular cluster around `mean_aoa` spanning +-`angular_spread` (radians).
struct ClusterSpec {
    double mean_aoa = kPi / 2;
    double angular_spread = deg2rad(10.0);
    int subpaths = 50;
};

struct ChannelRealization {
    CMatrix h;        // taps x antennas; row l is the tap-l spatial signature
    CMatrix gains;    // taps x subpaths
    RMatrix angles;   // taps x subpaths, radians
    RVector pdp;      // per-tap power
};

// a_m(theta) = exp(-j 2 chi m cos(theta)), m = 0..M-1; theta must lie in (0, pi).
CVector steering_vector(const ArrayGeometry& geom, double theta);

// Same vector parameterized by cos(theta) in [-1, 1]; covers endfire directions.
CVector steering_vector_from_cosine(const ArrayGeometry& geom, double cos_theta);

RVector uniform_pdp(int taps, double total_power = 1.0);

ChannelRealization draw_channel(const ArrayGeometry& geom, const ClusterSpec& cluster,
                                const RVector& pdp, Rng& rng);

// Tap-wise sum of a main cluster and an optional side cluster.
ChannelRealization composite_channel(const ChannelRealization& main,
                                     const std::optional<ChannelRealization>& side);

// Spatial correlation E{H^H H} for a unit-power cluster with uniform AoA in
// (theta_k - spread, theta_k + spread): Hermitian Toeplitz with trace M.
CMatrix angular_correlation(const ArrayGeometry& geom, double theta_k, double spread);

}  // namespace adaf
