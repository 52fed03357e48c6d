// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/signal.hpp"

#include <span>
#include <vector>

namespace adaf {

struct BranchObservations {
    std::vector<CMatrix> blocks;  // per block, N x Q; column q is branch q
    CMatrix taps;                 // L x Q channel estimates, filled by estimate_branch_channels

    int branches() const { return blocks.empty() ? 0 : static_cast<int>(blocks[0].cols()); }
};

// Combine each block with the spatial weights and undo the estimated offset,
// including the phase accumulated since the pilot block.
BranchObservations beamform_compensate(std::span<const CMatrix> received, const CMatrix& omega,
                                       double phi_hat, int cp);

// Least-squares tap estimate (B^H B)^-1 B^H z.
CVector ls_channel_estimate(const CVector& z, const CMatrix& pilot);

// Per-branch taps from the pilot block (block 0).
void estimate_branch_channels(BranchObservations& obs, const CMatrix& pilot);

// sum_l taps_l exp(-j 2 pi n l / N), n = 0..N-1.
CVector frequency_response(const CVector& taps, int subcarriers);

struct DetectionReport {
    std::vector<CVector> decisions;  // per data block; NaN marks an erasure
    long symbols = 0;
    long errors = 0;
    long erasures = 0;

    double ser() const { return symbols > 0 ? static_cast<double>(errors) / symbols : 0.0; }
};

// Maximal-ratio combining over branches on every data block (blocks 1..),
// followed by a nearest-point decision. When `truth` is non-empty it holds the
// transmitted data blocks and errors are counted against it.
DetectionReport mrc_detect(const BranchObservations& obs, Constellation constellation,
                           std::span<const CVector> truth = {});

// Fraction of positions where detected differs from truth.
double symbol_error_rate(std::span<const cd> detected, std::span<const cd> truth);

}  // namespace adaf
