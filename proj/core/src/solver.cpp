#include "plab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace plab {

namespace {

/// Bilinear element on a uniform cell with 2x2 Gauss quadrature. One shared
/// quadrature for the energy, its gradient and the lagged linear operator:
/// the Picard step is then an exact descent direction for p_energy, which is
/// what makes the backtracked energy history monotone to rounding.
struct QuadRule {
    // Gradients of the four corner shape functions (00, 10, 01, 11) at the
    // four Gauss points, on the reference cell [0,1]^2 (scale by 1/h).
    std::array<std::array<Vec2, 4>, 4> dphi;
    static QuadRule make() {
        QuadRule q;
        const double g = 0.5 * (1.0 - 1.0 / std::sqrt(3.0));
        const double pts[2] = {g, 1.0 - g};
        int gp = 0;
        for (int b = 0; b < 2; ++b)
            for (int a = 0; a < 2; ++a, ++gp) {
                const double xi = pts[a];
                const double eta = pts[b];
                q.dphi[gp][0] = Vec2{-(1.0 - eta), -(1.0 - xi)};
                q.dphi[gp][1] = Vec2{(1.0 - eta), -xi};
                q.dphi[gp][2] = Vec2{-eta, (1.0 - xi)};
                q.dphi[gp][3] = Vec2{eta, xi};
            }
        return q;
    }
};

const QuadRule& quad_rule() {
    static const QuadRule q = QuadRule::make();
    return q;
}

struct Cell {
    int corner[4];  // node indices (00, 10, 01, 11)
};

/// Gradient of the bilinear interpolant at Gauss point gp, times h (the
/// reference-cell gradient; divide by h for the physical one).
inline Vec2 ref_gradient(const QuadRule& q, const double* v, int gp) {
    Vec2 g{};
    for (int c = 0; c < 4; ++c) {
        g.x += v[c] * q.dphi[gp][c].x;
        g.y += v[c] * q.dphi[gp][c].y;
    }
    return g;
}

struct FemSystem {
    const Grid* grid;
    std::vector<int> ordinal;  // node index -> unknown ordinal or -1
    std::vector<std::pair<int, int>> ij;
    std::vector<Cell> cells;        // cells whose four corners carry values
    std::vector<double> node_vals;  // scratch: current full nodal vector
    std::vector<double> gamma;      // per cell x 4 Gauss points
    std::vector<double> diag;
    std::vector<double> rhs;

    explicit FemSystem(const Grid& g) : grid(&g) {
        ordinal.assign(g.num_nodes(), -1);
        g.for_each_interior([&](int i, int j) {
            ordinal[g.index(i, j)] = static_cast<int>(ij.size());
            ij.emplace_back(i, j);
        });
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i) {
                if (!g.has_value(i, j) || !g.has_value(i + 1, j) || !g.has_value(i, j + 1) ||
                    !g.has_value(i + 1, j + 1))
                    continue;
                Cell c;
                c.corner[0] = static_cast<int>(g.index(i, j));
                c.corner[1] = static_cast<int>(g.index(i + 1, j));
                c.corner[2] = static_cast<int>(g.index(i, j + 1));
                c.corner[3] = static_cast<int>(g.index(i + 1, j + 1));
                cells.push_back(c);
            }
        node_vals.assign(g.num_nodes(), 0.0);
        gamma.assign(cells.size() * 4, 0.0);
        diag.assign(ij.size(), 0.0);
        rhs.assign(ij.size(), 0.0);
    }

    void load_nodes(const ScalarField& u) {
        const Grid& g = *grid;
        g.for_each_in_domain([&](int i, int j) { node_vals[g.index(i, j)] = u.at(i, j); });
    }

    /// Freeze gamma = (|Du|^2 + eps)^{(p-2)/2} at the Gauss points of the
    /// current iterate, rebuild the Jacobi diagonal and the Dirichlet rhs.
    void assemble(const ScalarField& u, double p, double eps) {
        const QuadRule& q = quad_rule();
        load_nodes(u);
        const double inv_h2 = 1.0 / (grid->h() * grid->h());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v[4];
            for (int k = 0; k < 4; ++k) v[k] = node_vals[cells[c].corner[k]];
            for (int gp = 0; gp < 4; ++gp) {
                const Vec2 g = ref_gradient(q, v, gp);
                gamma[c * 4 + gp] = std::pow(g.norm2() * inv_h2 + eps, 0.5 * (p - 2.0));
            }
        }

        std::fill(diag.begin(), diag.end(), 0.0);
        for (std::size_t c = 0; c < cells.size(); ++c)
            for (int k = 0; k < 4; ++k) {
                const int ord = ordinal[cells[c].corner[k]];
                if (ord < 0) continue;
                double d = 0.0;
                for (int gp = 0; gp < 4; ++gp)
                    d += gamma[c * 4 + gp] * q.dphi[gp][k].norm2();
                diag[ord] += 0.25 * d;
            }

        // rhs = -A_IB u_B: apply the operator to the boundary extension.
        std::vector<double> zero(ij.size(), 0.0);
        apply_full(zero, /*use_boundary=*/true, rhs);
        for (double& v : rhs) v = -v;
    }

    /// out = A_II x (+ A_IB u_B when use_boundary), scattered to unknowns.
    void apply_full(const std::vector<double>& x, bool use_boundary, std::vector<double>& out) const {
        const QuadRule& q = quad_rule();
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            double v[4];
            bool all_zero = true;
            for (int k = 0; k < 4; ++k) {
                const int node = cells[c].corner[k];
                const int ord = ordinal[node];
                v[k] = ord >= 0 ? x[ord] : (use_boundary ? node_vals[node] : 0.0);
                if (v[k] != 0.0) all_zero = false;
            }
            if (all_zero) continue;
            for (int gp = 0; gp < 4; ++gp) {
                const Vec2 g = ref_gradient(q, v, gp);
                const double w = 0.25 * gamma[c * 4 + gp];
                for (int k = 0; k < 4; ++k) {
                    const int ord = ordinal[cells[c].corner[k]];
                    if (ord >= 0) out[ord] += w * g.dot(q.dphi[gp][k]);
                }
            }
        }
    }

    void apply(const std::vector<double>& x, std::vector<double>& out) const {
        apply_full(x, false, out);
    }

    long solve_cg(std::vector<double>& x, double rel_tol, long max_iters) const {
        const std::size_t n = x.size();
        std::vector<double> r(n), z(n), d(n), q(n);
        apply(x, q);
        double b2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            r[k] = rhs[k] - q[k];
            b2 += rhs[k] * rhs[k];
        }
        const double target2 = rel_tol * rel_tol * std::max(b2, 1e-300);
        double rz = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            z[k] = r[k] / diag[k];
            rz += r[k] * z[k];
        }
        d = z;
        double r2 = 0.0;
        for (double v : r) r2 += v * v;
        long it = 0;
        while (r2 > target2 && it < max_iters) {
            apply(d, q);
            double dq = 0.0;
            for (std::size_t k = 0; k < n; ++k) dq += d[k] * q[k];
            if (dq <= 0.0) break;
            const double alpha = rz / dq;
            r2 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                x[k] += alpha * d[k];
                r[k] -= alpha * q[k];
                r2 += r[k] * r[k];
            }
            double rz_new = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                z[k] = r[k] / diag[k];
                rz_new += r[k] * z[k];
            }
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t k = 0; k < n; ++k) d[k] = z[k] + beta * d[k];
            ++it;
        }
        return it;
    }
};

}  // namespace

double p_energy(const ScalarField& u, double p, double eps) {
    if (eps < 0.0) throw std::invalid_argument("p_energy: eps must be >= 0");
    const Grid& g = u.grid();
    const QuadRule& q = quad_rule();
    const double h2 = g.h() * g.h();
    const double inv_h2 = 1.0 / h2;
    double total = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.has_value(i, j) || !g.has_value(i + 1, j) || !g.has_value(i, j + 1) ||
                !g.has_value(i + 1, j + 1))
                continue;
            const double v[4] = {u.at(i, j), u.at(i + 1, j), u.at(i, j + 1), u.at(i + 1, j + 1)};
            for (int gp = 0; gp < 4; ++gp) {
                const Vec2 grad = ref_gradient(q, v, gp);
                total += 0.25 * h2 * std::pow(grad.norm2() * inv_h2 + eps, 0.5 * p) / p;
            }
        }
    return total;
}

SolutionReport solve(const DirichletProblem& problem, const SolverConfig& config) {
    if (!problem.grid) throw std::invalid_argument("solve: missing grid");
    if (problem.p <= 1.0) throw std::invalid_argument("solve: p must be > 1");
    if (problem.eps <= 0.0) throw std::invalid_argument("solve: eps must be > 0");
    if (config.max_outer_iters < 1 || config.update_tol <= 0.0 || config.inner_tol <= 0.0 ||
        config.damping <= 0.0 || config.damping > 1.0)
        throw std::invalid_argument("solve: invalid solver configuration");

    const Grid& grid = *problem.grid;
    if (problem.boundary_values.empty() || &problem.boundary_values.grid() != &grid)
        throw std::invalid_argument("solve: boundary_values must live on the problem grid");
    ScalarField u(problem.grid);
    grid.for_each_in_domain([&](int i, int j) {
        if (grid.is_boundary(i, j)) u.at(i, j) = problem.boundary_values.at(i, j);
    });

    FemSystem sys(grid);
    const std::size_t n = sys.ij.size();
    std::vector<double> x(n, 0.0);
    const long max_cg = std::max<long>(20000, static_cast<long>(40.0 * std::sqrt(double(n))));

    SolutionReport rep;
    if (config.initial_guess != nullptr) {
        for (std::size_t k = 0; k < n; ++k) {
            const auto [i, j] = sys.ij[k];
            x[k] = config.initial_guess->at(i, j);
        }
    } else if (config.init == SolverConfig::Init::harmonic) {
        sys.assemble(u, 2.0, 1.0);  // p = 2 makes gamma constant
        rep.total_cg_iters += sys.solve_cg(x, config.inner_tol, max_cg);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const auto [i, j] = sys.ij[k];
        u.at(i, j) = x[k];
    }

    double energy = p_energy(u, problem.p, problem.eps);
    rep.energy_history.push_back(energy);

    bool converged = false;
    int iter = 0;
    while (iter < config.max_outer_iters) {
        ++iter;
        sys.assemble(u, problem.p, problem.eps);
        for (std::size_t k = 0; k < n; ++k) {
            const auto [i, j] = sys.ij[k];
            x[k] = u.at(i, j);
        }
        rep.total_cg_iters += sys.solve_cg(x, config.inner_tol, max_cg);

        // The Picard step is a descent direction for the energy (shared
        // quadrature); halve the step until the energy decreases.
        const double slack = 1e-12 * std::max(1.0, std::abs(energy));
        double alpha = config.damping;
        ScalarField candidate = u;
        double cand_energy = 0.0;
        bool accepted = false;
        while (alpha >= 1e-6) {
            for (std::size_t k = 0; k < n; ++k) {
                const auto [i, j] = sys.ij[k];
                candidate.at(i, j) = u.at(i, j) + alpha * (x[k] - u.at(i, j));
            }
            cand_energy = p_energy(candidate, problem.p, problem.eps);
            if (cand_energy <= energy + slack) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // no descent available: stop with converged = false

        double update = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto [i, j] = sys.ij[k];
            update = std::max(update, std::abs(candidate.at(i, j) - u.at(i, j)));
        }
        u = candidate;
        energy = cand_energy;
        rep.energy_history.push_back(energy);
        rep.final_update = update;
        if (update < config.update_tol) {
            converged = true;
            break;
        }
    }

    assert_finite(u, "solve");
    rep.u = std::move(u);
    rep.converged = converged;
    rep.outer_iters = iter;
    rep.final_energy = energy;
    return rep;
}

}  // namespace plab
