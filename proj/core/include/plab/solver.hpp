#pragma once

#include "plab/grid.hpp"

#include <vector>

namespace plab {

/// Regularized Dirichlet problem
///   div((|Du|^2 + eps)^{(p-2)/2} Du) = 0  in the interior,
///   u = boundary_values                    on boundary nodes.
struct DirichletProblem {
    std::shared_ptr<const Grid> grid;
    double p = 2.0;
    double eps = 1e-3;
    ScalarField boundary_values;  ///< read on boundary nodes only
};

struct SolverConfig {
    int max_outer_iters = 200;
    double update_tol = 1e-9;    ///< sup-norm of successive iterates
    double damping = 1.0;        ///< initial step fraction, halved on energy increase
    double inner_tol = 1e-11;    ///< CG relative-residual tolerance
    enum class Init { zero, harmonic } init = Init::harmonic;
    const ScalarField* initial_guess = nullptr;  ///< optional warm start (overrides init)
};

struct SolutionReport {
    ScalarField u;
    bool converged = false;
    int outer_iters = 0;
    double final_update = 0.0;
    double final_energy = 0.0;
    std::vector<double> energy_history;  ///< energy after each accepted step
    long total_cg_iters = 0;
};

/// Damped Picard iteration: each outer step freezes the coefficient
/// (|Du|^2 + eps)^{(p-2)/2} at the quadrature points of a bilinear-element
/// discretization and solves the resulting SPD linear problem with
/// Jacobi-preconditioned CG. Energy and operator share one quadrature, so
/// the Picard step is an exact descent direction and accepted steps lower
/// p_energy up to rounding. Failure to converge is reported through
/// `converged` with the history intact. Rejects p <= 1 and eps <= 0.
SolutionReport solve(const DirichletProblem& problem, const SolverConfig& config);

/// Cellwise quadrature of (|Du|^2 + eps)^{p/2} / p over cells whose four
/// corners carry values (2x2 Gauss points of the bilinear interpolant).
double p_energy(const ScalarField& u, double p, double eps);

}  // namespace plab
