// SPDX-License-Identifier: Apache-2.0
#include "adaf/detect.hpp"

#include "adaf/numkernel.hpp"

#include <cmath>
#include <limits>

namespace adaf {

BranchObservations beamform_compensate(std::span<const CMatrix> received, const CMatrix& omega,
                                       double phi_hat, int cp) {
    require(!received.empty(), "no received blocks");
    const auto n = static_cast<int>(received[0].rows());
    require(omega.rows() == received[0].cols(), "combiner and received blocks disagree on M");
    const CVector derot = cfo_phases(n, phi_hat).conjugate();

    BranchObservations obs;
    obs.blocks.reserve(received.size());
    for (std::size_t i = 0; i < received.size(); ++i) {
        require(received[i].rows() == n && received[i].cols() == omega.rows(),
                "received blocks have inconsistent shapes");
        const cd eta = std::conj(accumulative_phase(static_cast<int>(i) + 1, n, cp, phi_hat));
        obs.blocks.push_back((eta * derot).asDiagonal() * (received[i] * omega));
    }
    return obs;
}

CVector ls_channel_estimate(const CVector& z, const CMatrix& pilot) {
    require(z.size() == pilot.rows(), "observation length differs from pilot rows");
    return linalg::solve_hermitian(pilot.adjoint() * pilot, pilot.adjoint() * z);
}

void estimate_branch_channels(BranchObservations& obs, const CMatrix& pilot) {
    require(!obs.blocks.empty(), "no branch observations");
    require(obs.blocks[0].rows() == pilot.rows(), "pilot rows differ from block length");
    obs.taps = linalg::solve_hermitian(pilot.adjoint() * pilot, pilot.adjoint() * obs.blocks[0]);
}

CVector frequency_response(const CVector& taps, int subcarriers) {
    require(subcarriers >= taps.size(), "more taps than subcarriers");
    CVector h = CVector::Zero(subcarriers);
    for (int n = 0; n < subcarriers; ++n)
        for (Eigen::Index l = 0; l < taps.size(); ++l)
            h(n) += taps(l) * std::polar(1.0, -2.0 * kPi * static_cast<double>((n * l) % subcarriers) /
                                                  subcarriers);
    return h;
}

DetectionReport mrc_detect(const BranchObservations& obs, Constellation constellation,
                           std::span<const CVector> truth) {
    require(!obs.blocks.empty(), "no branch observations");
    require(obs.taps.cols() == obs.branches() && obs.taps.rows() >= 1,
            "branch channel estimates are missing");
    const auto n = static_cast<int>(obs.blocks[0].rows());
    const std::size_t data_blocks = obs.blocks.size() - 1;
    require(truth.empty() || truth.size() == data_blocks, "truth must cover every data block");

    const Dft dft(n);
    CMatrix resp(n, obs.branches());
    for (int q = 0; q < obs.branches(); ++q) resp.col(q) = frequency_response(obs.taps.col(q), n);
    const RVector gain = resp.rowwise().squaredNorm();

    DetectionReport report;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i < obs.blocks.size(); ++i) {
        const CMatrix spectrum = dft.forward(obs.blocks[i]);
        CVector decided(n);
        for (int k = 0; k < n; ++k) {
            if (!(gain(k) > 0.0) || !std::isfinite(gain(k))) {
                decided(k) = cd(nan, nan);
                ++report.erasures;
                continue;
            }
            const cd combined = (resp.row(k).conjugate() * spectrum.row(k).transpose())(0) / gain(k);
            decided(k) = nearest_point(constellation, combined);
        }
        if (!truth.empty()) {
            require(truth[i - 1].size() == n, "truth block has wrong length");
            for (int k = 0; k < n; ++k)
                if (!(decided(k) == truth[i - 1](k))) ++report.errors;
            report.symbols += n;
        }
        report.decisions.push_back(std::move(decided));
    }
    return report;
}

double symbol_error_rate(std::span<const cd> detected, std::span<const cd> truth) {
    require(detected.size() == truth.size(), "detected and truth lengths differ");
    if (truth.empty()) return 0.0;
    std::size_t errors = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (!(detected[i] == truth[i])) ++errors;
    return static_cast<double>(errors) / truth.size();
}

}  // namespace adaf
