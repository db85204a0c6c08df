// Discrete differential operators and the derived-quantity fields: exactness
// on low-degree polynomials, O(h^2) convergence oracles, the V_s family, and
// the pointwise Hessian lower bound (including its PDE-constrained algebra).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "plab/exact_solutions.hpp"
#include "plab/field_calculus.hpp"
#include "plab/matrix_inequalities.hpp"
#include "plab/rng.hpp"

#include "test_support.hpp"

#include <cmath>
#include <functional>

using namespace plab;
using plab_test::make_annulus;
using plab_test::observed_order;

namespace {

std::shared_ptr<const Grid> unit_square(int cells) {
    return Grid::square(cells, cells, 1.0 / cells, Vec2{0.0, 0.0});
}

ScalarField fill(std::shared_ptr<const Grid> grid, const std::function<double(Vec2)>& f) {
    ScalarField u(grid);
    grid->for_each_in_domain([&](int i, int j) { u.at(i, j) = f(grid->pos(i, j)); });
    return u;
}

double max_interior(const ScalarField& f) {
    double m = 0.0;
    f.grid().for_each_interior([&](int i, int j) { m = std::max(m, std::abs(f.at(i, j))); });
    return m;
}

}  // namespace

// ============================================================================
// gradient / hessian stencils
// ============================================================================

TEST_CASE("gradient: exact on linear and quadratic functions") {
    auto grid = unit_square(16);
    const ScalarField lin = fill(grid, [](Vec2 x) { return 2.0 * x.x - 3.0 * x.y + 0.5; });
    const VectorField dlin = gradient(lin);
    grid->for_each_interior([&](int i, int j) {
        CHECK(dlin.at(i, j).x == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(dlin.at(i, j).y == doctest::Approx(-3.0).epsilon(1e-13));
    });

    const ScalarField quad = fill(grid, [](Vec2 x) { return x.x * x.x; });
    const VectorField dquad = gradient(quad);
    grid->for_each_interior([&](int i, int j) {
        CHECK(dquad.at(i, j).x == doctest::Approx(2.0 * grid->pos(i, j).x).epsilon(1e-12));
    });
}

TEST_CASE("hessian: exact on quadratic forms, zero on linear") {
    auto grid = unit_square(12);
    // u = <x, Qx>/2 with Q = [[2, 1], [1, -3]].
    const ScalarField u = fill(grid, [](Vec2 x) {
        return 0.5 * (2.0 * x.x * x.x + 2.0 * x.x * x.y - 3.0 * x.y * x.y);
    });
    const SymMatrixField h = hessian(u);
    grid->for_each_interior([&](int i, int j) {
        CHECK(h.at(i, j).xx == doctest::Approx(2.0).epsilon(1e-11));
        CHECK(h.at(i, j).xy == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(h.at(i, j).yy == doctest::Approx(-3.0).epsilon(1e-11));
    });

    const ScalarField lin = fill(grid, [](Vec2 x) { return 4.0 * x.x - x.y; });
    const SymMatrixField hl = hessian(lin);
    grid->for_each_interior([&](int i, int j) {
        CHECK(std::abs(hl.at(i, j).xx) <= 1e-12);
        CHECK(std::abs(hl.at(i, j).xy) <= 1e-12);
        CHECK(std::abs(hl.at(i, j).yy) <= 1e-12);
    });
}

TEST_CASE("gradient and hessian: O(h^2) convergence on sin/cos fields") {
    double grad_err[2];
    double hess_err[2];
    for (int lvl = 0; lvl < 2; ++lvl) {
        auto grid = unit_square(lvl == 0 ? 32 : 64);
        const ScalarField u = fill(grid, [](Vec2 x) { return std::sin(3.0 * x.x) * std::cos(2.0 * x.y); });
        const VectorField du = gradient(u);
        const SymMatrixField d2u = hessian(u);
        double ge = 0.0, he = 0.0;
        grid->for_each_interior([&](int i, int j) {
            const Vec2 x = grid->pos(i, j);
            const double ux = 3.0 * std::cos(3.0 * x.x) * std::cos(2.0 * x.y);
            const double uxy = -6.0 * std::cos(3.0 * x.x) * std::sin(2.0 * x.y);
            ge = std::max(ge, std::abs(du.at(i, j).x - ux));
            he = std::max(he, std::abs(d2u.at(i, j).xy - uxy));
        });
        grad_err[lvl] = ge;
        hess_err[lvl] = he;
    }
    CHECK(observed_order(grad_err[0], grad_err[1]) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(observed_order(hess_err[0], hess_err[1]) == doctest::Approx(2.0).epsilon(0.15));
}

// ============================================================================
// pointwise derived fields
// ============================================================================

TEST_CASE("infinity laplacian: radial and degenerate cases") {
    auto grid = unit_square(10);
    const ScalarField u = fill(grid, [](Vec2 x) { return x.norm2(); });  // |x|^2
    const VectorField du = gradient(u);
    const SymMatrixField d2u = hessian(u);
    const ScalarField inf = infinity_laplacian(du, d2u);
    const ScalarField ninf = normalized_infinity_laplacian(du, d2u);
    grid->for_each_interior([&](int i, int j) {
        const double r2 = grid->pos(i, j).norm2();
        CHECK(inf.at(i, j) == doctest::Approx(8.0 * r2).epsilon(1e-10));
        if (r2 > 0.0) CHECK(ninf.at(i, j) == doctest::Approx(2.0).epsilon(1e-10));
    });

    const ScalarField lin = fill(grid, [](Vec2 x) { return x.x; });
    const ScalarField inf_lin = infinity_laplacian(gradient(lin), hessian(lin));
    CHECK(max_interior(inf_lin) <= 1e-12);

    // Du = 0 everywhere: both vanish, the normalized one by convention.
    const ScalarField c = fill(grid, [](Vec2) { return 1.25; });
    CHECK(max_interior(normalized_infinity_laplacian(gradient(c), hessian(c))) == 0.0);
}

TEST_CASE("mu_field: hand values") {
    auto grid = unit_square(4);
    VectorField du(grid);
    grid->for_each_in_domain([&](int i, int j) { du.at(i, j) = Vec2{3.0, 4.0}; });
    CHECK(mu_field(du, 0.0).at(2, 2) == doctest::Approx(5.0));

    grid->for_each_in_domain([&](int i, int j) { du.at(i, j) = Vec2{}; });
    CHECK(mu_field(du, 1.0).at(2, 2) == doctest::Approx(1.0));

    grid->for_each_in_domain([&](int i, int j) { du.at(i, j) = Vec2{1.0, 0.0}; });
    CHECK(mu_field(du, 1.0).at(2, 2) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("a_matrix_field: identity cases and ellipticity bounds") {
    auto grid = unit_square(8);
    VectorField du(grid);

    // Du = 0 with eps > 0: A = I.
    SymMatrixField a0 = a_matrix_field(du, 0.5, 3.0);
    CHECK(a0.at(3, 3).xx == doctest::Approx(1.0));
    CHECK(a0.at(3, 3).xy == doctest::Approx(0.0));

    // p = 2: A = I for any gradient.
    CounterRng rng(21);
    grid->for_each_in_domain([&](int i, int j) { du.at(i, j) = Vec2{rng.gaussian(), rng.gaussian()}; });
    SymMatrixField a2 = a_matrix_field(du, 1e-3, 2.0);
    grid->for_each_interior([&](int i, int j) {
        CHECK(a2.at(i, j).xx == doctest::Approx(1.0));
        CHECK(a2.at(i, j).xy == doctest::Approx(0.0));
        CHECK(a2.at(i, j).yy == doctest::Approx(1.0));
    });

    // Du = (1,0), eps -> 0, p = 3: A -> diag(2, 1).
    grid->for_each_in_domain([&](int i, int j) { du.at(i, j) = Vec2{1.0, 0.0}; });
    SymMatrixField a3 = a_matrix_field(du, 1e-14, 3.0);
    CHECK(a3.at(4, 4).xx == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(a3.at(4, 4).yy == doctest::Approx(1.0));

    // Eigenvalues stay inside [min(1, p-1), max(1, p-1)].
    for (double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
        grid->for_each_in_domain(
            [&](int i, int j) { du.at(i, j) = Vec2{rng.gaussian(), rng.gaussian()}; });
        const SymMatrixField a = a_matrix_field(du, 1e-6, p);
        const double lo = std::min(1.0, p - 1.0) - 1e-12;
        const double hi = std::max(1.0, p - 1.0) + 1e-12;
        grid->for_each_interior([&](int i, int j) {
            const SymMat2 m = a.at(i, j);
            const double mean = 0.5 * (m.xx + m.yy);
            const double disc = std::sqrt(0.25 * (m.xx - m.yy) * (m.xx - m.yy) + m.xy * m.xy);
            CHECK(mean - disc >= lo);
            CHECK(mean + disc <= hi);
        });
    }

    // eps = 0 with a vanishing gradient node is rejected.
    grid->for_each_in_domain([&](int i, int j) { du.at(i, j) = Vec2{}; });
    CHECK_THROWS_AS(a_matrix_field(du, 0.0, 3.0), std::invalid_argument);
}

// ============================================================================
// V_s family
// ============================================================================

TEST_CASE("v_s: identity map at p = 2, s = 0") {
    const Vec2 z{0.7, -2.2};
    const Vec2 w = v_s(z, 2.0, 0.0);
    CHECK(w.x == doctest::Approx(z.x));
    CHECK(w.y == doctest::Approx(z.y));
}

TEST_CASE("v_s: zero maps to zero for all admissible parameters") {
    for (double p : {1.5, 2.0, 4.0})
        for (double s : {-1.0, 0.0, 2.0})
            for (double eps : {0.0, 1e-4}) {
                const Vec2 w = v_s_eps(Vec2{}, p, s, eps);
                CHECK(w.x == 0.0);
                CHECK(w.y == 0.0);
            }
}

TEST_CASE("v_s: p = 3, s = 0 hand value") {
    const Vec2 w = v_s(Vec2{2.0, 0.0}, 3.0, 0.0);
    CHECK(w.x == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(w.y == doctest::Approx(0.0));
}

TEST_CASE("v_s_eps with eps = 0 equals v_s") {
    CounterRng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        const Vec2 z{rng.gaussian(), rng.gaussian()};
        const Vec2 a = v_s(z, 2.7, -0.4);
        const Vec2 b = v_s_eps(z, 2.7, -0.4, 0.0);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
}

TEST_CASE("v_s_inverse: round trip over magnitudes from 1e-8 to 1e8") {
    CounterRng rng(32);
    const double mags[] = {1e-8, 1e-3, 1.0, 1e3, 1e8};
    for (double p : {1.5, 2.0, 3.0, 4.0})
        for (double s : {0.5 - p + 1e-3, 0.0, p - 2.0, 2.0}) {
            if (p + s <= 0.0) continue;
            for (double mag : mags)
                for (int rep = 0; rep < 30; ++rep) {
                    Vector z = rng.gaussian_vector(2);
                    z *= mag / z.norm();
                    const Vector back = v_s_inverse(v_s(z, p, s), p, s);
                    for (int k = 0; k < 2; ++k)
                        CHECK(back[k] == doctest::Approx(z[k]).epsilon(1e-12));
                }
        }
    CHECK_THROWS_AS(v_s_inverse(Vec2{1.0, 0.0}, 1.5, -2.0), std::invalid_argument);
}

// ============================================================================
// d_v_s_field
// ============================================================================

TEST_CASE("d_v_s_field: p = 2, s = 0 returns the Hessian; linear fields vanish") {
    auto grid = unit_square(10);
    const ScalarField u = fill(grid, [](Vec2 x) { return std::sin(x.x) * x.y + 0.3 * x.x; });
    const VectorField du = gradient(u);
    const SymMatrixField d2u = hessian(u);
    const VsJacobianField jac = d_v_s_field(du, d2u, 2.0, 0.0, 0.0);
    grid->for_each_interior([&](int i, int j) {
        CHECK(jac.jacobian.at(i, j).xx == doctest::Approx(d2u.at(i, j).xx));
        CHECK(jac.jacobian.at(i, j).xy == doctest::Approx(d2u.at(i, j).xy));
        CHECK(jac.jacobian.at(i, j).yx == doctest::Approx(d2u.at(i, j).xy));
        CHECK(jac.jacobian.at(i, j).yy == doctest::Approx(d2u.at(i, j).yy));
    });

    const ScalarField lin = fill(grid, [](Vec2 x) { return x.x + 2.0 * x.y; });
    const VsJacobianField jl = d_v_s_field(gradient(lin), hessian(lin), 4.0, 0.0, 0.0);
    grid->for_each_interior([&](int i, int j) {
        CHECK(std::abs(jl.jacobian.at(i, j).frobenius2()) <= 1e-20);
    });
}

TEST_CASE("d_v_s_field: squared norm matches the closed-form expansion") {
    auto grid = unit_square(12);
    const ScalarField u = fill(grid, [](Vec2 x) { return std::exp(0.3 * x.x) * std::cos(x.y); });
    const VectorField du = gradient(u);
    const SymMatrixField d2u = hessian(u);
    for (double p : {1.5, 3.0})
        for (double s : {0.0, p - 2.0, 1.0}) {
            const VsJacobianField jac = d_v_s_field(du, d2u, p, s, 1e-3);
            grid->for_each_interior([&](int i, int j) {
                const Vec2 g = du.at(i, j);
                const SymMat2 H = d2u.at(i, j);
                const double mu = std::sqrt(g.norm2() + 1e-3);
                const double expanded = d_v_s_norm2(mu, g.norm2(), H.frobenius2(),
                                                    H.apply(g).norm2(), p, s);
                CHECK(jac.jacobian.at(i, j).frobenius2() ==
                      doctest::Approx(expanded).epsilon(1e-10));
            });
        }
}

TEST_CASE("d_v_s_field: matches finite differences of V_s(Du) node values, O(h^2)") {
    // Radial p-harmonic oracle with analytic derivatives; the Jacobian from
    // the chain rule is compared against centered differences of the sampled
    // V_s(Du) values.
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 4.0);
    double errs[2];
    for (int lvl = 0; lvl < 2; ++lvl) {
        auto grid = make_annulus(lvl == 0 ? 64 : 128, 1.1, 0.4, 1.05);
        const VectorField du = sample_gradient(sol, grid);
        const SymMatrixField d2u = sample_hessian(sol, grid);
        const VsJacobianField jac = d_v_s_field(du, d2u, 4.0, 0.0, 0.0);

        VectorField vs(grid);
        grid->for_each_in_domain([&](int i, int j) { vs.at(i, j) = v_s(du.at(i, j), 4.0, 0.0); });
        const double h = grid->h();
        double err = 0.0;
        grid->for_each_interior([&](int i, int j) {
            const double r = grid->pos(i, j).norm();
            if (r < 0.47 || r > 1.0) return;  // stay clear of the staircase boundary
            const Mat2 fd{(vs.at(i + 1, j).x - vs.at(i - 1, j).x) / (2.0 * h),
                          (vs.at(i, j + 1).x - vs.at(i, j - 1).x) / (2.0 * h),
                          (vs.at(i + 1, j).y - vs.at(i - 1, j).y) / (2.0 * h),
                          (vs.at(i, j + 1).y - vs.at(i, j - 1).y) / (2.0 * h)};
            const Mat2 an = jac.jacobian.at(i, j);
            err = std::max({err, std::abs(fd.xx - an.xx), std::abs(fd.xy - an.xy),
                            std::abs(fd.yx - an.yx), std::abs(fd.yy - an.yy)});
        });
        errs[lvl] = err;
    }
    CHECK(observed_order(errs[0], errs[1]) >= 1.7);
}

TEST_CASE("d_v_s_field: flags singular nodes at eps = 0") {
    auto grid = unit_square(8);
    VectorField du(grid);   // identically zero gradient
    SymMatrixField d2u(grid);
    const VsJacobianField jac = d_v_s_field(du, d2u, 3.0, 0.0, 0.0);
    CHECK(jac.singular_nodes.size() == grid->interior_count() + grid->boundary_count());
}

// ============================================================================
// reformulation identities
// ============================================================================

TEST_CASE("derivative-quantity reformulations hold pointwise") {
    auto grid = unit_square(12);
    const ScalarField u = fill(grid, [](Vec2 x) { return std::sin(2.0 * x.x + 1.0) * std::cos(x.y); });
    const VectorField du = gradient(u);
    const SymMatrixField d2u = hessian(u);
    const ScalarField inf = infinity_laplacian(du, d2u);
    const ScalarField ninf = normalized_infinity_laplacian(du, d2u);
    grid->for_each_interior([&](int i, int j) {
        const double g2 = du.at(i, j).norm2();
        if (g2 == 0.0) return;
        const Vec2 Hg = d2u.at(i, j).apply(du.at(i, j));
        // |D2u Du|^2 = |Du|^2 |D|Du||^2 with |D|Du|| = |D2u Du| / |Du|.
        const double lhs = Hg.norm2();
        const double d_absdu = std::sqrt(Hg.norm2()) / std::sqrt(g2);
        CHECK(lhs == doctest::Approx(g2 * d_absdu * d_absdu).epsilon(1e-12));
        // (inf)^2 = |Du|^4 (normalized inf)^2.
        const double i2 = inf.at(i, j) * inf.at(i, j);
        CHECK(i2 == doctest::Approx(g2 * g2 * ninf.at(i, j) * ninf.at(i, j)).epsilon(1e-12));
    });
}

// ============================================================================
// Hessian lower bound (pointwise)
// ============================================================================

TEST_CASE("hessian lower bound: PDE-constrained random samples stay nonnegative") {
    // Adjust tr(A) so the pair (A, g) satisfies the non-divergence equation,
    // then the bound must hold; for n = 2 it must be an equality.
    CounterRng rng(41);
    for (int n : {2, 3, 5}) {
        for (double p : {1.5, 2.0, 3.0, 4.0}) {
            for (double eps : {0.0, 1e-2}) {
                for (int rep = 0; rep < 400; ++rep) {
                    const SymMatrix A0 = rng.gaussian_symmetric(n);
                    Vector g = rng.gaussian_vector(n);
                    if (eps == 0.0 && g.norm() < 1e-6) continue;
                    const double mu2 = g.norm2() + eps;
                    const double t = (p - 2.0) * g.norm2() / mu2;
                    const double c =
                        -(A0.trace() + (p - 2.0) * g.dot(A0.apply(g)) / mu2) / (n + t);
                    SymMatrix A = A0;
                    for (int k = 0; k < n; ++k) A.set(k, k, A0(k, k) + c);
                    const double res = hessian_lower_bound_residual(A, g, p, eps, n);
                    const double scale = std::max(1.0, A.frobenius2());
                    CHECK(res >= -1e-11 * scale);
                    if (n == 2) CHECK(std::abs(res) <= 1e-10 * scale);
                }
            }
        }
    }
}

TEST_CASE("hessian lower bound: p = 2 collapses Phi to 1/(n-1) - 1") {
    CHECK(hessian_bound_phi(2.0, 0.0, 1.0, 2) == doctest::Approx(0.0));
    CHECK(hessian_bound_phi(2.0, 0.0, 1.0, 3) == doctest::Approx(-0.5));
    CHECK(hessian_bound_phi(2.0, 0.5, 1.0, 4) == doctest::Approx(1.0 / 3.0 - 1.0));
}

TEST_CASE("hessian lower bound: exact radial fields give equality for n = 2") {
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 4.0);
    auto grid = make_annulus(96, 1.1, 0.4, 1.05);
    const VectorField du = sample_gradient(sol, grid);
    const SymMatrixField d2u = sample_hessian(sol, grid);
    const PointwiseReport rep = hessian_lower_bound_check(du, d2u, 4.0, 0.0, 2, 1e-10);
    CHECK(rep.violation_count == 0);
    CHECK(rep.max_abs_residual <= 1e-10);
    CHECK(rep.nc_count == 0);
    CHECK_FALSE(rep.unverifiable);
}

TEST_CASE("hessian lower bound: radial closed forms satisfy the bound for n = 3") {
    // Synthetic 3-D point cloud; radial solutions realize equality for every
    // n because the tangential Hessian block is a multiple of the identity.
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0, 0.0}, 4.0);
    CounterRng rng(42);
    for (int rep = 0; rep < 500; ++rep) {
        Vector x = rng.gaussian_vector(3);
        x *= (0.5 + rng.uniform01()) / x.norm();
        const auto vals = sol.eval(x);
        const double res = hessian_lower_bound_residual(vals.d2u, vals.du, 4.0, 0.0, 3);
        CHECK(std::abs(res) <= 1e-10 * std::max(1.0, vals.d2u.frobenius2()));
    }
}

TEST_CASE("hessian lower bound: linear fields have zero residual") {
    auto grid = unit_square(8);
    const ScalarField u = fill(grid, [](Vec2 x) { return 3.0 * x.x - x.y; });
    const PointwiseReport rep = hessian_lower_bound_check(gradient(u), hessian(u), 3.0, 0.0, 2, 1e-12);
    CHECK(rep.min_residual == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(rep.violation_count == 0);
}

TEST_CASE("hessian lower bound: near-critical nodes are reported separately") {
    auto grid = unit_square(16);
    // Saddle with Du = 0 at the center of the square.
    const ScalarField u = fill(grid, [](Vec2 x) {
        const Vec2 d{x.x - 0.5, x.y - 0.5};
        return d.x * d.x - d.y * d.y;
    });
    const double eps = 1e-3;
    const PointwiseReport rep = hessian_lower_bound_check(gradient(u), hessian(u), 2.0, eps, 2, 1e-9);
    CHECK(rep.nc_count > 0);                       // nodes with |Du| < 10 sqrt(eps)
    CHECK(rep.checked_nodes + rep.nc_count == static_cast<long>(grid->interior_count()));
    // p = 2, n = 2: Phi = 0 and |D2u|^2 = 2|D|Du||^2 exactly for this saddle.
    CHECK(rep.violation_count == 0);
    CHECK(rep.max_abs_residual <= 1e-9);
}

// ============================================================================
// PDE residual fields
// ============================================================================

TEST_CASE("nondivergence residual: harmonic polynomial with p = 2 is the discrete Laplacian") {
    auto grid = unit_square(20);
    const ScalarField u = fill(grid, [](Vec2 x) { return x.x * x.x - x.y * x.y; });
    const ScalarField res = nondivergence_residual(u, 2.0, 0.0);
    CHECK(max_interior(res) <= 1e-10);  // quadratic: discrete Laplacian is exact
}

TEST_CASE("nondivergence residual: radial p-harmonic oracle converges at O(h^2)") {
    const ExactSolution sol = ExactSolution::radial_power(Vector{0.0, 0.0}, 4.0);
    double errs[2];
    for (int lvl = 0; lvl < 2; ++lvl) {
        auto grid = make_annulus(lvl == 0 ? 64 : 128, 1.1, 0.4, 1.05);
        const ScalarField u = sample_scalar(sol, grid);
        const ScalarField res = nondivergence_residual(u, 4.0, 0.0);
        double err = 0.0;
        grid->for_each_interior([&](int i, int j) {
            const double r = grid->pos(i, j).norm();
            if (r < 0.47 || r > 1.0) return;  // stay clear of the staircase boundary
            err = std::max(err, std::abs(res.at(i, j)));
        });
        errs[lvl] = err;
    }
    CHECK(observed_order(errs[0], errs[1]) >= 1.7);
}

TEST_CASE("linearized residual: p = 2 reduces to the Laplacian of the gradient component") {
    auto grid = unit_square(16);
    const ScalarField u = fill(grid, [](Vec2 x) { return std::sin(x.x) * std::exp(0.5 * x.y); });
    const ScalarField res = linearized_residual(u, 2.0, 1e-3, 0);

    const VectorField du = gradient(u);
    ScalarField v(grid);
    grid->for_each_in_domain([&](int i, int j) { v.at(i, j) = du.at(i, j).x; });
    const double h = grid->h();
    grid->for_each_interior([&](int i, int j) {
        const double lap = (v.at(i + 1, j) + v.at(i - 1, j) + v.at(i, j + 1) + v.at(i, j - 1) -
                            4.0 * v.at(i, j)) /
                           (h * h);
        CHECK(res.at(i, j) == doctest::Approx(lap).epsilon(1e-10));
    });
}

TEST_CASE("linearized residual: linear fields give zero") {
    auto grid = unit_square(10);
    const ScalarField u = fill(grid, [](Vec2 x) { return 2.0 * x.x + 5.0 * x.y - 1.0; });
    // Roundoff in the node samples is amplified by 1/h^2.
    for (int axis : {0, 1}) CHECK(max_interior(linearized_residual(u, 3.0, 1e-2, axis)) <= 1e-10);
}
