// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "adaf/acm.hpp"
#include "adaf/types.hpp"

namespace adaf {

// Quantities entering the closed-form CFO MSE for one user.
struct MseIngredients {
    CMatrix r_script;  // conj(U) [U^T Omega conj(U)]^-1 U^T, M x M
    double g0 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double d_k = 0.0;
    double r_k = 0.0;  // tr(U^T R_k conj(U)), energy of the own cluster seen by the beams
    double sigma_n2 = 0.0;
    int taps = 0;
    int subcarriers = 0;
    int antennas = 0;
    int branches = 0;
};

// `interference` is either the sum of other users' correlation matrices or
// the sum of realized H^H H products; `own_correlation` is R_k.
MseIngredients mse_ingredients(const AcmMatrix& acm, const CMatrix& interference,
                               const CMatrix& own_correlation, const CMatrix& pilot,
                               double sigma_n2);

// Same, with the pilot energy term supplied directly (for example averaged
// over many pilot draws).
MseIngredients mse_ingredients(const AcmMatrix& acm, const CMatrix& interference,
                               const CMatrix& own_correlation, double sigma_n2, int subcarriers,
                               int taps, double d_k);

// Beam-domain shortcut for orthonormal beams: `interference_beam` is
// U^T Pi conj(U) and `own_beam` is U^T R_k conj(U). r_script is left empty.
MseIngredients beam_domain_ingredients(const CMatrix& interference_beam, const CMatrix& own_beam,
                                       double sigma_n2, int subcarriers, int taps, double d_k);

// ||(I - P_B) D^H B||_F^2 with D = j (2 pi / N) diag(0..N-1).
double pilot_dk(const CMatrix& pilot);
// Same quantity through tr(B^H D (I - P_B) D^H B).
double pilot_dk_trace(const CMatrix& pilot);
// Large-N value pi^2 N L / 3.
double dk_large_n_limit(int subcarriers, int taps);

// General closed form; throws NumericalError when the denominator vanishes.
double analytical_mse(const MseIngredients& ing);

double alpha_no_overlap(int subcarriers, int taps, int branches);
double alpha_overlap(int subcarriers, int taps, int branches);

// Closed forms for well-separated users, heavy overlap with many beams, and
// the large-array limit. Angles in radians.
double mse_no_overlap(int subcarriers, int taps, int branches, double sigma_n2, double theta_k,
                      double spread, double d_k);
double mse_overlap_asymptotic(int subcarriers, int taps, int branches, double sigma_n2,
                              double theta_k, double spread, double d_k);
double mse_large_limit(int antennas, int subcarriers, double sigma_n2, double spread,
                       double alpha1, bool small_spread = false);

struct ComplexityCount {
    double cfo_ops = 0.0;
    double detect_ops = 0.0;
};

// Complex multiplications for CFO estimation and detection of K users.
ComplexityCount adaf_complexity(int users, int subcarriers, int antennas, int taps, int branches,
                                int newton_iterations, int blocks);

}  // namespace adaf
