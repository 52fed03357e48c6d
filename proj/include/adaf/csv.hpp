// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/sweep.hpp"

#include <string>

namespace adaf {

std::string format_csv(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);

// Reads text produced by format_csv back into a result (scenario id,
// estimator and seed come from the first row).
SweepResult parse_csv(const std::string& text);

// One two-column "snr value" file per user and curve, named
// <prefix>_u<user>_<curve>.dat. Curves that are NaN everywhere are skipped.
void emit_gnuplot(const SweepResult& result, const std::string& prefix);

}  // namespace adaf
