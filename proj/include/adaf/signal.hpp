// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/channel.hpp"
#include "adaf/types.hpp"

#include <span>
#include <vector>

namespace adaf {

enum class Constellation { qpsk, qam16 };

// Unit average energy points; QPSK is (+-1 +-j)/sqrt(2), 16-QAM is {+-1,+-3}^2/sqrt(10).
std::span<const cd> constellation_points(Constellation c);

CVector draw_symbols(Constellation c, int count, Rng& rng);

// Nearest constellation point (minimum Euclidean distance).
cd nearest_point(Constellation c, cd value);

// Diagonal of the rotation diag(exp(j 2 pi n phi / N)), n = 0..N-1.
CVector cfo_phases(int subcarriers, double phi);
CMatrix cfo_rotation(int subcarriers, double phi);

// Phase accumulated by the start of block `block` (1-based) after
// (block-1) blocks of N + N_cp samples each.
cd accumulative_phase(int block, int subcarriers, int cp, double phi);

// Unitary DFT with entries exp(-j 2 pi m n / N) / sqrt(N).
class Dft {
public:
    explicit Dft(int n);
    int size() const { return static_cast<int>(matrix_.rows()); }
    const CMatrix& matrix() const { return matrix_; }
    CVector forward(const CVector& x) const { return matrix_ * x; }
    CMatrix forward(const CMatrix& x) const { return matrix_ * x; }
    CVector inverse(const CVector& x) const { return matrix_.adjoint() * x; }

private:
    CMatrix matrix_;
};

// N x L matrix mapping channel taps to received samples for frequency-domain
// symbols x: column l is the time-domain block circularly delayed by l.
CMatrix build_pilot_matrix(const CVector& symbols, int taps);

struct FrameConfig {
    int subcarriers = 64;
    int cp = 16;
    int blocks = 2;  // block 1 carries the pilot, the rest carry data
    int taps = 10;
    Constellation pilot = Constellation::qpsk;
    Constellation data = Constellation::qam16;
};

void validate_frame(const FrameConfig& cfg);

struct UserFrame {
    double cfo = 0.0;
    std::vector<CVector> symbols;  // per block, length N
    std::vector<CMatrix> blocks;   // per block, N x L
};

struct UplinkFrame {
    FrameConfig config;
    std::vector<UserFrame> users;
};

UplinkFrame draw_frame(const FrameConfig& cfg, std::span<const double> cfos, Rng& rng);

// Received blocks without noise: sum over users of eta_i E(phi) B_i H.
std::vector<CMatrix> noiseless_received(const UplinkFrame& frame,
                                        std::span<const ChannelRealization> channels);

// Adds CN(0, noise_var) to every entry.
void add_noise(std::vector<CMatrix>& blocks, double noise_var, Rng& rng);

std::vector<CMatrix> synthesize_received(const UplinkFrame& frame,
                                         std::span<const ChannelRealization> channels,
                                         double noise_var, Rng& rng);

}  // namespace adaf
