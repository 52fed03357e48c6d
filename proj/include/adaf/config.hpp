// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/channel.hpp"
#include "adaf/estimator.hpp"
#include "adaf/signal.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace adaf {

struct UserSpec {
    double aoa_deg = 90.0;
    std::optional<double> side_aoa_deg;
};

// How the interference term of the general closed form is formed: from the
// other users' angular correlation matrices, or from the channels actually
// drawn in each trial (then averaged over trials).
enum class InterferenceModel { statistical, realized };

struct AnalysisSelection {
    bool eq24 = true;
    bool eq28 = true;
    bool eq38 = true;
    bool eq39 = true;
    InterferenceModel interference = InterferenceModel::statistical;
};

struct ExperimentConfig {
    std::string scenario_id = "custom";
    ArrayGeometry geom{64, 0.5};
    std::vector<UserSpec> users{UserSpec{}};
    double angular_spread_deg = 10.0;
    int subpaths = 50;
    double side_spread_deg = 2.0;
    double smpr_db = 0.0;                // side-to-main power ratio used by the side-cluster mode
    std::vector<double> smpr_sweep_db;   // values visited by the CLI side-cluster robustness run
    FrameConfig frame{};
    std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
    double cfo_range = 0.2;
    int trials = 500;
    std::uint64_t seed = 1;
    double aoa_bias_deg = 0.0;
    CostKind estimator = CostKind::adaptive;
    AnalysisSelection analysis{};
    double grid_step = 0.01;
    int newton_iterations = 5;
    int workers = 0;            // 0 picks the hardware concurrency
    bool perfect_cfo = false;   // skip estimation and combine at the true offset
};

void validate(const ExperimentConfig& cfg);

// Named scenarios: fig3, fig4, fig5, fig7.
ExperimentConfig preset(const std::string& name);

// "a:b:step" or a comma separated list, in dB.
std::vector<double> parse_snr_range(const std::string& text);

// Apply "key = value" lines ('#' starts a comment) on top of `cfg`.
void apply_config_text(ExperimentConfig& cfg, const std::string& text);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

std::string estimator_name(CostKind kind);
CostKind parse_estimator(const std::string& name);

}  // namespace adaf
