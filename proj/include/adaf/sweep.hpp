// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adaf {

struct PointResult {
    double snr_db = 0.0;
    int user = 0;
    double mse_numerical = 0.0;
    double mse_stderr = 0.0;  // standard error of mse_numerical
    double mse_eq24 = 0.0;
    double mse_eq28 = 0.0;
    double mse_eq38 = 0.0;
    double mse_eq39 = 0.0;
    double ser = 0.0;  // NaN when detection was not run
    long trials = 0;
    long failures = 0;
    long fallbacks = 0;
};

struct SweepResult {
    std::string scenario_id;
    std::string estimator;
    std::uint64_t seed = 0;
    std::vector<PointResult> points;  // SNR ascending, then user
    double wall_seconds = 0.0;
};

enum class RobustnessMode { aoa_bias, side_cluster };

// Offsets and beam weights per trial; analytical columns attached per point.
SweepResult run_mse_sweep(const ExperimentConfig& cfg);
// Full receive chain; needs at least two blocks per frame.
SweepResult run_ser_sweep(const ExperimentConfig& cfg);
// MSE, plus SER when the frame has data blocks, under AoA bias or side clusters.
SweepResult run_robustness_sweep(const ExperimentConfig& cfg, RobustnessMode mode);
// Closed-form curves only; pilot energies averaged over `trials` pilot draws.
SweepResult run_analysis(const ExperimentConfig& cfg);

// Independent generator for one (seed, trial, purpose) triple.
Rng trial_stream(std::uint64_t seed, std::uint64_t trial, std::uint32_t purpose);

}  // namespace adaf
