// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/estimator.hpp"

namespace adaf {

// Fixed matched-filter beams: grid search and Newton steps on the
// diagonal-only cost, raw beam columns as combiners with unit gains.
AdafSolution mf_baseline_estimate(const CMatrix& received, const CMatrix& pilot,
                                  const AcmMatrix& acm, const EstimateOptions& options = {});

}  // namespace adaf
