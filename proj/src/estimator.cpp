// SPDX-License-Identifier: Apache-2.0
#include "adaf/estimator.hpp"

#include "adaf/numkernel.hpp"
#include "adaf/signal.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace adaf {
namespace {

constexpr double kGolden = 0.6180339887498949;

// Multiply row n by exp(-j 2 pi n phi / N).
CMatrix derotate(const CMatrix& z, double phi) {
    const CVector phases = cfo_phases(static_cast<int>(z.rows()), phi).conjugate();
    return phases.asDiagonal() * z;
}

CMatrix project_out(const CMatrix& basis, const CMatrix& w) {
    return w - basis * (basis.adjoint() * w);
}

// Row n scaled by s * n^power.
CMatrix scale_rows(const CMatrix& w, cd s, int power) {
    CMatrix out(w.rows(), w.cols());
    for (Eigen::Index n = 0; n < w.rows(); ++n)
        out.row(n) = (s * std::pow(static_cast<double>(n), power)) * w.row(n);
    return out;
}

double evaluate_or_nan(const AdafProblem& p, double phi, CostKind kind) {
    try {
        return sinr_cost(p, phi, kind);
    } catch (const NumericalError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Maximize the cost on [lo, hi]; unusable points score as -inf.
double golden_section(const AdafProblem& p, double lo, double hi, double tol, CostKind kind) {
    auto score = [&](double x) {
        const double v = evaluate_or_nan(p, x, kind);
        return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
    };
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = score(x1), f2 = score(x2);
    while (b - a > tol) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = score(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = score(x2);
        }
    }
    if (!std::isfinite(std::max(f1, f2)))
        throw NumericalError("refinement: objective undefined throughout the search window");
    return 0.5 * (a + b);
}

struct Curvature {
    double t1;
    double t2;
};

Curvature curvature_terms(const AdafProblem& p, double phi, CostKind kind) {
    const int n = p.subcarriers();
    const double w0 = 2.0 * kPi / n;
    const CMatrix w = derotate(p.beamspace(), phi);
    const CMatrix& basis = p.pilot_basis();
    const CMatrix r = project_out(basis, w);
    const CMatrix a1 = scale_rows(w, cd(0.0, -w0), 1);      // D^H W
    const CMatrix a2 = scale_rows(w, cd(-w0 * w0, 0.0), 2);  // (D^2)^H W
    const CMatrix pa1 = project_out(basis, a1);

    const CMatrix t0 = r.adjoint() * r;
    CMatrix t1 = a1.adjoint() * r;
    t1 += t1.adjoint().eval();
    CMatrix t2 = a2.adjoint() * r;
    t2 += t2.adjoint().eval();
    t2.noalias() += 2.0 * (pa1.adjoint() * pa1);

    if (kind == CostKind::matched_filter) {
        Curvature c{0.0, 0.0};
        for (Eigen::Index q = 0; q < t0.rows(); ++q) {
            const double d = t0(q, q).real();
            if (!(d > 0.0)) throw NumericalError("refinement: beam residual power vanished");
            const double psi = p.psi()(q, q).real();
            c.t1 += psi * t1(q, q).real() / (d * d);
            c.t2 += psi * t2(q, q).real() / (d * d);
        }
        return c;
    }

    const CMatrix lower = linalg::cholesky_factor(t0, false);
    const CMatrix k = linalg::lower_adjoint_solve(lower, linalg::lower_solve(lower, p.psi_factor()));
    return {(k.adjoint() * t1 * k).trace().real(), (k.adjoint() * t2 * k).trace().real()};
}

}  // namespace

AdafProblem::AdafProblem(const CMatrix& received, const CMatrix& pilot, const AcmMatrix& acm)
    : received_(received), pilot_(pilot), acm_(acm) {
    require(received.rows() >= 2 && received.cols() >= 1, "received block is empty");
    require(pilot.rows() == received.rows(), "pilot matrix and received block disagree on N");
    require(acm.u.rows() == received.cols(), "beam matrix and received block disagree on M");
    require(acm.branches() >= 1, "beam matrix has no columns");
    require(pilot.cols() >= 1 && pilot.cols() < pilot.rows(), "pilot matrix must be tall");
    if (!linalg::all_finite(received)) throw NumericalError("received block has non-finite entries");
    beamspace_ = received_ * acm_.u.conjugate();
    basis_ = linalg::orthonormal_basis(pilot_);
    psi_ = beamspace_.adjoint() * beamspace_;
    try {
        psi_factor_ = linalg::cholesky_factor(psi_);
    } catch (const NumericalError& e) {
        psi_error_ = e.what();
    }
}

const CMatrix& AdafProblem::psi_factor() const {
    if (psi_factor_.size() == 0)
        throw NumericalError("received beam covariance is singular (" + psi_error_ + ")");
    return psi_factor_;
}

CMatrix AdafProblem::projected(double phi) const {
    return project_out(basis_, derotate(beamspace_, phi));
}

CMatrix psi_matrix(const AdafProblem& problem) { return problem.psi(); }

CMatrix xi_matrix(const AdafProblem& problem, double phi) {
    const CMatrix r = problem.projected(phi);
    return r.adjoint() * r;
}

double sinr_cost(const AdafProblem& problem, double phi, CostKind kind) {
    const CMatrix r = problem.projected(phi);
    if (kind == CostKind::matched_filter) {
        double g = 0.0;
        for (Eigen::Index q = 0; q < r.cols(); ++q) {
            const double xi = r.col(q).squaredNorm();
            if (!(xi > 0.0)) throw NumericalError("cost: beam residual power vanished");
            g += problem.psi()(q, q).real() / xi;
        }
        return g;
    }
    const CMatrix xi = r.adjoint() * r;
    CMatrix lower;
    try {
        lower = linalg::cholesky_factor(xi, false);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("cost: residual covariance is singular (") + e.what() + ")");
    }
    const double g = linalg::lower_solve(lower, problem.psi_factor()).squaredNorm();
    // G is the sum of 1/lambda with lambda in (0, 1]; a huge value means a null direction in xi
    if (!std::isfinite(g) || g > linalg::kConditionCap * problem.branches())
        throw NumericalError("cost: residual covariance is singular relative to the beam covariance");
    return g;
}

double coarse_cfo_search(const AdafProblem& problem, double step, CostKind kind) {
    require(step > 0.0 && step < 0.5, "grid step must lie in (0, 0.5)");
    const int count = static_cast<int>(std::floor(1.0 / step + 1e-9));
    double best_phi = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 1; i < count; ++i) {
        const double phi = -0.5 + i * step;
        if (phi >= 0.5) break;
        const double g = evaluate_or_nan(problem, phi, kind);
        if (std::isnan(g)) continue;
        if (!any || g > best) {
            best = g;
            best_phi = phi;
            any = true;
        }
    }
    if (!any) throw NumericalError("coarse search: objective undefined at every grid point");
    return best_phi;
}

NewtonResult newton_refine(const AdafProblem& problem, double phi0, const RefineOptions& options,
                           CostKind kind) {
    require(options.max_iterations >= 0, "iteration cap must be non-negative");
    require(options.window > 0.0, "refinement window must be positive");
    NewtonResult out{phi0, 0, false, false};

    auto fall_back = [&] {
        out.fell_back = true;
        out.phi = golden_section(problem, std::max(phi0 - options.window, -0.5),
                                 std::min(phi0 + options.window, 0.5), options.tolerance, kind);
        out.converged = true;
        return out;
    };

    double phi = phi0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        Curvature c{};
        try {
            c = curvature_terms(problem, phi, kind);
        } catch (const NumericalError&) {
            return fall_back();
        }
        if (!(c.t2 > 0.0) || !std::isfinite(c.t1)) return fall_back();
        const double next = phi - c.t1 / c.t2;
        if (!(std::abs(next - phi0) <= options.window)) return fall_back();
        out.iterations = it;
        const double delta = next - phi;
        phi = next;
        if (std::abs(delta) < options.tolerance) {
            out.converged = true;
            break;
        }
    }
    out.phi = phi;
    return out;
}

AdafSolution branch_solution(const AdafProblem& problem, double phi_hat, CostKind kind) {
    const int q = problem.branches();
    const CMatrix r = problem.projected(phi_hat);
    AdafSolution s;
    s.phi_hat = phi_hat;

    if (kind == CostKind::matched_filter) {
        s.beta = CMatrix::Identity(q, q);
        s.gamma = CMatrix::Identity(q, q);
        s.alpha = RVector::Ones(q);
        s.lambda.resize(q);
        for (int i = 0; i < q; ++i) {
            const double xi = r.col(i).squaredNorm();
            if (!(xi > 0.0)) throw NumericalError("branch solution: beam residual power vanished");
            s.lambda(i) = xi / problem.psi()(i, i).real();
        }
        s.omega = problem.acm().u.conjugate();
        s.cost_trace = s.lambda.cwiseInverse().sum();
        return s;
    }

    const CMatrix& c = problem.psi_factor();
    // C^-1 Xi C^-H = (C^-1 R^H)(C^-1 R^H)^H
    const CMatrix x = linalg::lower_solve(c, r.adjoint());
    const linalg::HermitianEig eig = linalg::hermitian_eig(x * x.adjoint());
    if (!(eig.values(0) > 0.0))
        throw NumericalError("branch solution: residual covariance is singular");
    s.lambda = eig.values;
    s.beta = eig.vectors;
    s.gamma = linalg::lower_adjoint_solve(c, s.beta);
    s.alpha = s.lambda.cwiseSqrt().cwiseInverse();
    s.omega = problem.acm().u.conjugate() * s.gamma * s.alpha.asDiagonal();
    s.cost_trace = s.lambda.cwiseInverse().sum();
    return s;
}

AdafSolution estimate(const CMatrix& received, const CMatrix& pilot, const AcmMatrix& acm,
                      const EstimateOptions& options, CostKind kind) {
    const AdafProblem problem(received, pilot, acm);
    double coarse = 0.0;
    try {
        coarse = coarse_cfo_search(problem, options.grid_step, kind);
    } catch (const Error& e) {
        throw NumericalError(std::string("coarse search failed: ") + e.what());
    }

    NewtonResult refined{coarse, 0, false, true};
    try {
        refined = newton_refine(problem, coarse,
                                {options.newton_iterations, options.tolerance, options.grid_step},
                                kind);
    } catch (const NumericalError&) {
        // keep the grid value
    }

    AdafSolution s;
    try {
        s = branch_solution(problem, refined.phi, kind);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("branch solution failed: ") + e.what());
    }
    s.coarse_phi = coarse;
    s.newton_iterations = refined.iterations;
    s.converged = refined.converged;
    s.fell_back = refined.fell_back;
    return s;
}

}  // namespace adaf
