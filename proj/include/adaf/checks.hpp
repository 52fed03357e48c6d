// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace adaf {

struct CheckOutcome {
    std::string name;
    bool passed = false;
    double worst = 0.0;  // largest observed deviation (meaning depends on the check)
    std::string detail;
};

// Random Hermitian PD matrices against random unitaries: the eigenvector
// objective dominates and equals tr(A^-1).
CheckOutcome check_branch_optimality(std::uint64_t seed, int matrices = 100, int unitaries = 1000,
                                     int max_dim = 8);

// tr(Rs R Rs Pi) against g1 / (N - L) - sigma^2 g2 on random scenarios.
CheckOutcome check_g3_identity(std::uint64_t seed, int scenarios = 50);

// E[tr(A N C) conj(tr(A N C))] = sigma^2 tr(A A^H C^H C) for Gaussian N.
CheckOutcome check_noise_trace_moment(std::uint64_t seed, int pairs = 10, int draws = 10000);

// Cost on E(delta) Y at phi equals cost on Y at phi - delta.
CheckOutcome check_cost_shift(std::uint64_t seed, int instances = 50);

std::vector<CheckOutcome> run_all_checks(std::uint64_t seed);

// Haar-distributed unitary of the given size.
CMatrix random_unitary(int dim, Rng& rng);

}  // namespace adaf
