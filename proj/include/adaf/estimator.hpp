// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/acm.hpp"
#include "adaf/types.hpp"

#include <string>

namespace adaf {

// Which objective drives the search. `adaptive` is the full-matrix
// multi-branch SINR trace; `matched_filter` keeps only the diagonals, so
// each beam is scored on its own without interference suppression.
enum class CostKind { adaptive, matched_filter };

// Pilot-block data for one user with the beam-domain quantities cached.
class AdafProblem {
public:
    AdafProblem(const CMatrix& received, const CMatrix& pilot, const AcmMatrix& acm);

    const CMatrix& received() const { return received_; }
    const CMatrix& pilot() const { return pilot_; }
    const AcmMatrix& acm() const { return acm_; }
    const CMatrix& beamspace() const { return beamspace_; }    // Y conj(U), N x Q
    const CMatrix& pilot_basis() const { return basis_; }      // orthonormal, spans range(B)
    const CMatrix& psi() const { return psi_; }                // Q x Q
    const CMatrix& psi_factor() const;  // lower, psi = C C^H; throws when psi is singular

    int subcarriers() const { return static_cast<int>(received_.rows()); }
    int taps() const { return static_cast<int>(pilot_.cols()); }
    int branches() const { return acm_.branches(); }

    // Compensated beam-domain samples with the pilot component removed:
    // (I - P_B) E^H(phi) Y conj(U).
    CMatrix projected(double phi) const;

private:
    CMatrix received_;
    CMatrix pilot_;
    AcmMatrix acm_;
    CMatrix beamspace_;
    CMatrix basis_;
    CMatrix psi_;
    CMatrix psi_factor_;
    std::string psi_error_;
};

CMatrix psi_matrix(const AdafProblem& problem);
CMatrix xi_matrix(const AdafProblem& problem, double phi);

// Objective to maximize over the trial offset phi.
double sinr_cost(const AdafProblem& problem, double phi, CostKind kind = CostKind::adaptive);

// Grid maximizer over (-0.5, 0.5) with spacing `step`; ties go to the
// smaller offset.
double coarse_cfo_search(const AdafProblem& problem, double step,
                         CostKind kind = CostKind::adaptive);

struct NewtonResult {
    double phi = 0.0;
    int iterations = 0;
    bool converged = false;
    bool fell_back = false;  // golden-section search replaced the Newton steps
};

struct RefineOptions {
    int max_iterations = 5;
    double tolerance = 1e-7;
    double window = 0.01;  // allowed distance from the starting point
};

NewtonResult newton_refine(const AdafProblem& problem, double phi0, const RefineOptions& options,
                           CostKind kind = CostKind::adaptive);

struct AdafSolution {
    double phi_hat = 0.0;
    CMatrix beta;    // Q x Q, unit-norm eigenvectors
    CMatrix gamma;   // Q x Q, beam weights with gamma^H psi gamma = I
    RVector lambda;  // Q, ascending for the adaptive kind
    RVector alpha;   // Q
    CMatrix omega;   // M x Q spatial combiners, column q = alpha_q conj(U) gamma_q
    double cost_trace = 0.0;

    double coarse_phi = 0.0;
    int newton_iterations = 0;
    bool converged = false;
    bool fell_back = false;
};

AdafSolution branch_solution(const AdafProblem& problem, double phi_hat,
                             CostKind kind = CostKind::adaptive);

struct EstimateOptions {
    double grid_step = 0.01;
    int newton_iterations = 5;
    double tolerance = 1e-7;
};

// Coarse grid, Newton refinement, then branch weights at the refined offset.
AdafSolution estimate(const CMatrix& received, const CMatrix& pilot, const AcmMatrix& acm,
                      const EstimateOptions& options = {}, CostKind kind = CostKind::adaptive);

}  // namespace adaf
