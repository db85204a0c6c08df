// Solver verification: immediate convergence at p = 2, reproduction of
// linear solutions for all p, energy monotonicity, the discrete maximum
// principle, convergence against the radial oracle, and the uniqueness probe.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plab/exact_solutions.hpp"
#include "plab/solver.hpp"

#include "test_support.hpp"

#include <cmath>

using namespace plab;
using plab_test::make_annulus;
using plab_test::observed_order;

namespace {

ScalarField boundary_from(const ExactSolution& sol, std::shared_ptr<const Grid> grid) {
    ScalarField b(grid);
    grid->for_each_in_domain([&](int i, int j) {
        if (grid->is_boundary(i, j)) {
            Vector x(2);
            x[0] = grid->pos(i, j).x;
            x[1] = grid->pos(i, j).y;
            b.at(i, j) = sol.value(x);
        }
    });
    return b;
}

double rel_l2_error(const ScalarField& u, const ExactSolution& sol) {
    double num = 0.0;
    double den = 0.0;
    u.grid().for_each_interior([&](int i, int j) {
        Vector x(2);
        x[0] = u.grid().pos(i, j).x;
        x[1] = u.grid().pos(i, j).y;
        const double exact = sol.value(x);
        num += (u.at(i, j) - exact) * (u.at(i, j) - exact);
        den += exact * exact;
    });
    return std::sqrt(num / den);
}

}  // namespace

// ============================================================================
// p_energy
// ============================================================================

TEST_CASE("p_energy: zero field, constant-gradient field") {
    auto grid = Grid::square(16, 16, 1.0 / 16);
    ScalarField zero(grid);
    CHECK(p_energy(zero, 3.0, 0.0) == 0.0);

    const ExactSolution lin = ExactSolution::linear(Vector{2.0, -1.0}, 0.3);
    const ScalarField u = sample_scalar(lin, grid);
    const double a2 = 5.0;  // |a|^2
    for (double p : {1.5, 2.0, 4.0}) {
        const double expected = std::pow(a2, 0.5 * p) / p;  // times unit area
        CHECK(p_energy(u, p, 0.0) == doctest::Approx(expected).epsilon(1e-12));
    }
}

// ============================================================================
// solve
// ============================================================================

TEST_CASE("solve: rejects invalid problems") {
    auto grid = Grid::square(8, 8, 0.125);
    DirichletProblem prob{grid, 1.0, 1e-3, ScalarField(grid)};
    CHECK_THROWS_AS(solve(prob, SolverConfig{}), std::invalid_argument);
    prob.p = 2.0;
    prob.eps = 0.0;
    CHECK_THROWS_AS(solve(prob, SolverConfig{}), std::invalid_argument);
}

TEST_CASE("solve: p = 2 converges in one outer iteration to the discrete harmonic solution") {
    auto grid = Grid::square(24, 24, 1.0 / 24, Vec2{-0.5, -0.5});
    // x^2 - y^2 is discrete-harmonic for the five-point stencil, so the
    // solver must reproduce the samples to linear-solver tolerance.
    const ExactSolution sol = ExactSolution::harmonic_poly(2);
    DirichletProblem prob{grid, 2.0, 1e-2, boundary_from(sol, grid)};
    SolverConfig cfg;
    cfg.inner_tol = 1e-12;
    const SolutionReport rep = solve(prob, cfg);
    CHECK(rep.converged);
    CHECK(rep.outer_iters == 1);
    double err = 0.0;
    grid->for_each_interior([&](int i, int j) {
        const Vec2 x = grid->pos(i, j);
        err = std::max(err, std::abs(rep.u.at(i, j) - (x.x * x.x - x.y * x.y)));
    });
    CHECK(err <= 1e-9);
}

TEST_CASE("solve: linear boundary data reproduced for every p") {
    auto grid = Grid::square(20, 20, 1.0 / 20);
    const ExactSolution lin = ExactSolution::linear(Vector{1.0, 2.0}, -0.7);
    for (double p : {1.5, 3.0, 4.0}) {
        DirichletProblem prob{grid, p, 1e-3, boundary_from(lin, grid)};
        SolverConfig cfg;
        cfg.update_tol = 1e-10;
        const SolutionReport rep = solve(prob, cfg);
        CHECK(rep.converged);
        double err = 0.0;
        grid->for_each_interior([&](int i, int j) {
            const Vec2 x = grid->pos(i, j);
            err = std::max(err, std::abs(rep.u.at(i, j) - (x.x + 2.0 * x.y - 0.7)));
        });
        CHECK(err <= 1e-8);
    }
}

TEST_CASE("solve: energy history is non-increasing along accepted steps") {
    auto grid = make_annulus(48, 1.1, 0.4, 1.05);
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 4.0);
    DirichletProblem prob{grid, 4.0, 1e-3, boundary_from(sol, grid)};
    const SolutionReport rep = solve(prob, SolverConfig{});
    CHECK(rep.converged);
    REQUIRE(rep.energy_history.size() >= 2);
    for (std::size_t k = 1; k < rep.energy_history.size(); ++k) {
        const double slack = 1e-12 * std::max(1.0, std::abs(rep.energy_history[k - 1]));
        CHECK(rep.energy_history[k] <= rep.energy_history[k - 1] + slack);
    }
    CHECK(rep.final_energy == doctest::Approx(rep.energy_history.back()));
}

TEST_CASE("solve: discrete maximum principle for p = 2") {
    auto grid = Grid::square(20, 20, 1.0 / 20);
    ScalarField bdry(grid);
    double lo = 1e300;
    double hi = -1e300;
    grid->for_each_in_domain([&](int i, int j) {
        if (!grid->is_boundary(i, j)) return;
        const Vec2 x = grid->pos(i, j);
        bdry.at(i, j) = std::sin(7.0 * x.x) + 0.5 * std::cos(5.0 * x.y);
        lo = std::min(lo, bdry.at(i, j));
        hi = std::max(hi, bdry.at(i, j));
    });
    DirichletProblem prob{grid, 2.0, 1e-3, bdry};
    const SolutionReport rep = solve(prob, SolverConfig{});
    grid->for_each_interior([&](int i, int j) {
        CHECK(rep.u.at(i, j) >= lo - 1e-10);
        CHECK(rep.u.at(i, j) <= hi + 1e-10);
    });
}

TEST_CASE("solve: radial oracle convergence order >= 1 for p = 4") {
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 4.0);
    double errs[2];
    for (int lvl = 0; lvl < 2; ++lvl) {
        auto grid = make_annulus(lvl == 0 ? 48 : 96, 1.1, 0.4, 1.05);
        DirichletProblem prob{grid, 4.0, 1e-5, boundary_from(sol, grid)};
        SolverConfig cfg;
        cfg.update_tol = 1e-10;
        const SolutionReport rep = solve(prob, cfg);
        CHECK(rep.converged);
        errs[lvl] = rel_l2_error(rep.u, sol);
    }
    CHECK(observed_order(errs[0], errs[1]) >= 1.0);
}

TEST_CASE("solve: uniqueness probe, zero versus harmonic initialization") {
    auto grid = make_annulus(40, 1.1, 0.4, 1.05);
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 3.0);
    DirichletProblem prob{grid, 3.0, 1e-3, boundary_from(sol, grid)};
    SolverConfig cfg;
    cfg.update_tol = 1e-10;
    cfg.init = SolverConfig::Init::harmonic;
    const SolutionReport a = solve(prob, cfg);
    cfg.init = SolverConfig::Init::zero;
    const SolutionReport b = solve(prob, cfg);
    CHECK(a.converged);
    CHECK(b.converged);
    double dev = 0.0;
    grid->for_each_interior(
        [&](int i, int j) { dev = std::max(dev, std::abs(a.u.at(i, j) - b.u.at(i, j))); });
    CHECK(dev < 10.0 * cfg.update_tol);
}

TEST_CASE("solve: non-convergence is an explicit failure carrying the history") {
    auto grid = make_annulus(40, 1.1, 0.4, 1.05);
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 4.0);
    DirichletProblem prob{grid, 4.0, 1e-4, boundary_from(sol, grid)};
    SolverConfig cfg;
    cfg.max_outer_iters = 1;
    cfg.update_tol = 1e-14;
    cfg.init = SolverConfig::Init::zero;
    const SolutionReport rep = solve(prob, cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.outer_iters == 1);
    CHECK(rep.energy_history.size() == 2);  // initial energy plus one accepted step
}

TEST_CASE("solve: deterministic across repeated runs") {
    auto grid = make_annulus(32, 1.1, 0.4, 1.05);
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 3.0);
    DirichletProblem prob{grid, 3.0, 1e-3, boundary_from(sol, grid)};
    const SolutionReport a = solve(prob, SolverConfig{});
    const SolutionReport b = solve(prob, SolverConfig{});
    bool identical = true;
    grid->for_each_interior([&](int i, int j) {
        if (a.u.at(i, j) != b.u.at(i, j)) identical = false;
    });
    CHECK(identical);
}
