// SPDX-License-Identifier: Apache-2.0
#include "adaf/signal.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace adaf {
namespace {

const std::array<cd, 4>& qpsk_table() {
    static const std::array<cd, 4> t = [] {
        const double s = 1.0 / std::sqrt(2.0);
        return std::array<cd, 4>{cd{s, s}, cd{-s, s}, cd{-s, -s}, cd{s, -s}};
    }();
    return t;
}

const std::array<cd, 16>& qam16_table() {
    static const std::array<cd, 16> t = [] {
        std::array<cd, 16> out{};
        const double levels[4] = {-3.0, -1.0, 1.0, 3.0};
        const double s = 1.0 / std::sqrt(10.0);
        int k = 0;
        for (double re : levels)
            for (double im : levels) out[k++] = cd{re * s, im * s};
        return out;
    }();
    return t;
}

}  // namespace

std::span<const cd> constellation_points(Constellation c) {
    if (c == Constellation::qpsk) return qpsk_table();
    return qam16_table();
}

CVector draw_symbols(Constellation c, int count, Rng& rng) {
    require(count >= 0, "symbol count must be non-negative");
    const auto pts = constellation_points(c);
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    CVector out(count);
    for (int i = 0; i < count; ++i) out(i) = pts[pick(rng)];
    return out;
}

cd nearest_point(Constellation c, cd value) {
    const auto pts = constellation_points(c);
    cd best = pts[0];
    double best_d = std::numeric_limits<double>::infinity();
    for (const cd& p : pts) {
        const double d = std::norm(value - p);
        if (d < best_d) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

CVector cfo_phases(int subcarriers, double phi) {
    require(subcarriers >= 1, "subcarrier count must be positive");
    require(std::isfinite(phi), "frequency offset must be finite");
    CVector d(subcarriers);
    for (int n = 0; n < subcarriers; ++n) d(n) = std::polar(1.0, 2.0 * kPi * n * phi / subcarriers);
    return d;
}

CMatrix cfo_rotation(int subcarriers, double phi) {
    return cfo_phases(subcarriers, phi).asDiagonal();
}

cd accumulative_phase(int block, int subcarriers, int cp, double phi) {
    require(block >= 1, "block index is 1-based");
    require(subcarriers >= 1 && cp >= 0, "invalid block geometry");
    return std::polar(1.0, 2.0 * kPi * (block - 1) * (subcarriers + cp) * phi / subcarriers);
}

Dft::Dft(int n) {
    require(n >= 1, "DFT size must be positive");
    matrix_.resize(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k)
            matrix_(m, k) = std::polar(scale, -2.0 * kPi * static_cast<double>((m * k) % n) / n);
}

CMatrix build_pilot_matrix(const CVector& symbols, int taps) {
    const auto n = static_cast<int>(symbols.size());
    require(n >= 1, "pilot block is empty");
    require(taps >= 1 && taps <= n, "tap count must lie in [1, N]");

    // time-domain block s = F^H x (unitary inverse DFT)
    CVector s = CVector::Zero(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int t = 0; t < n; ++t) {
        cd acc = 0.0;
        for (int m = 0; m < n; ++m)
            acc += symbols(m) * std::polar(1.0, 2.0 * kPi * static_cast<double>((m * t) % n) / n);
        s(t) = scale * acc;
    }
    CMatrix b(n, taps);
    for (int l = 0; l < taps; ++l)
        for (int t = 0; t < n; ++t) b(t, l) = s(((t - l) % n + n) % n);
    return b;
}

void validate_frame(const FrameConfig& cfg) {
    require(cfg.subcarriers >= 2, "need at least two subcarriers");
    require(cfg.taps >= 1, "need at least one channel tap");
    require(cfg.subcarriers > 2 * cfg.taps, "subcarrier count must exceed twice the tap count");
    require(cfg.cp >= cfg.taps - 1, "cyclic prefix shorter than the channel memory");
    require(cfg.blocks >= 1, "frame needs at least the pilot block");
}

UplinkFrame draw_frame(const FrameConfig& cfg, std::span<const double> cfos, Rng& rng) {
    validate_frame(cfg);
    UplinkFrame frame{cfg, {}};
    frame.users.reserve(cfos.size());
    for (double phi : cfos) {
        require(std::isfinite(phi) && std::abs(phi) < 0.5, "frequency offset must lie in (-0.5, 0.5)");
        UserFrame u;
        u.cfo = phi;
        for (int i = 0; i < cfg.blocks; ++i) {
            const Constellation c = i == 0 ? cfg.pilot : cfg.data;
            u.symbols.push_back(draw_symbols(c, cfg.subcarriers, rng));
            u.blocks.push_back(build_pilot_matrix(u.symbols.back(), cfg.taps));
        }
        frame.users.push_back(std::move(u));
    }
    return frame;
}

std::vector<CMatrix> noiseless_received(const UplinkFrame& frame,
                                        std::span<const ChannelRealization> channels) {
    const FrameConfig& cfg = frame.config;
    require(channels.size() == frame.users.size(), "one channel per user is required");
    require(!channels.empty(), "at least one user is required");
    const Eigen::Index antennas = channels[0].h.cols();
    for (const auto& ch : channels)
        require(ch.h.rows() == cfg.taps && ch.h.cols() == antennas,
                "channel shape does not match the frame");

    std::vector<CMatrix> out(cfg.blocks, CMatrix::Zero(cfg.subcarriers, antennas));
    for (std::size_t k = 0; k < frame.users.size(); ++k) {
        const UserFrame& u = frame.users[k];
        const CVector rot = cfo_phases(cfg.subcarriers, u.cfo);
        for (int i = 0; i < cfg.blocks; ++i) {
            const cd eta = accumulative_phase(i + 1, cfg.subcarriers, cfg.cp, u.cfo);
            out[i].noalias() += (eta * rot).asDiagonal() * (u.blocks[i] * channels[k].h);
        }
    }
    return out;
}

void add_noise(std::vector<CMatrix>& blocks, double noise_var, Rng& rng) {
    require(noise_var >= 0.0 && std::isfinite(noise_var), "noise variance must be non-negative");
    for (auto& y : blocks)
        for (Eigen::Index j = 0; j < y.cols(); ++j)
            for (Eigen::Index i = 0; i < y.rows(); ++i) y(i, j) += complex_normal(rng, noise_var);
}

std::vector<CMatrix> synthesize_received(const UplinkFrame& frame,
                                         std::span<const ChannelRealization> channels,
                                         double noise_var, Rng& rng) {
    auto out = noiseless_received(frame, channels);
    add_noise(out, noise_var, rng);
    return out;
}

}  // namespace adaf
