// SPDX-License-Identifier: Apache-2.0
#include "adaf/baseline.hpp"

namespace adaf {

AdafSolution mf_baseline_estimate(const CMatrix& received, const CMatrix& pilot,
                                  const AcmMatrix& acm, const EstimateOptions& options) {
    return estimate(received, pilot, acm, options, CostKind::matched_filter);
}

}  // namespace adaf
