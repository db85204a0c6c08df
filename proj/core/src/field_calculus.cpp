#include "plab/field_calculus.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace plab {

namespace {

/// One-dimensional derivative along an axis with the best available stencil:
/// central, then one-sided three-point (second order), then one-sided
/// two-point. step = (di, dj) selects the axis.
double axis_derivative(const ScalarField& u, int i, int j, int di, int dj) {
    const Grid& g = u.grid();
    const double h = g.h();
    const bool plus = g.has_value(i + di, j + dj);
    const bool minus = g.has_value(i - di, j - dj);
    if (plus && minus) return (u.at(i + di, j + dj) - u.at(i - di, j - dj)) / (2.0 * h);
    if (plus) {
        if (g.has_value(i + 2 * di, j + 2 * dj))
            return (-3.0 * u.at(i, j) + 4.0 * u.at(i + di, j + dj) - u.at(i + 2 * di, j + 2 * dj)) /
                   (2.0 * h);
        return (u.at(i + di, j + dj) - u.at(i, j)) / h;
    }
    if (minus) {
        if (g.has_value(i - 2 * di, j - 2 * dj))
            return (3.0 * u.at(i, j) - 4.0 * u.at(i - di, j - dj) + u.at(i - 2 * di, j - 2 * dj)) /
                   (2.0 * h);
        return (u.at(i, j) - u.at(i - di, j - dj)) / h;
    }
    return 0.0;
}

double second_derivative(const ScalarField& u, int i, int j, int di, int dj) {
    const Grid& g = u.grid();
    const double h2 = g.h() * g.h();
    const bool plus = g.has_value(i + di, j + dj);
    const bool minus = g.has_value(i - di, j - dj);
    if (plus && minus)
        return (u.at(i + di, j + dj) - 2.0 * u.at(i, j) + u.at(i - di, j - dj)) / h2;
    if (plus && g.has_value(i + 2 * di, j + 2 * dj))
        return (u.at(i, j) - 2.0 * u.at(i + di, j + dj) + u.at(i + 2 * di, j + 2 * dj)) / h2;
    if (minus && g.has_value(i - 2 * di, j - 2 * dj))
        return (u.at(i, j) - 2.0 * u.at(i - di, j - dj) + u.at(i - 2 * di, j - 2 * dj)) / h2;
    return 0.0;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (&a != &b) throw std::invalid_argument(std::string(what) + ": fields on different grids");
}

}  // namespace

VectorField gradient(const ScalarField& u) {
    VectorField g(u.grid_ptr());
    u.grid().for_each_in_domain([&](int i, int j) {
        g.at(i, j) = Vec2{axis_derivative(u, i, j, 1, 0), axis_derivative(u, i, j, 0, 1)};
    });
    return g;
}

SymMatrixField hessian(const ScalarField& u) {
    const Grid& grid = u.grid();
    SymMatrixField h(u.grid_ptr());

    // Cross derivatives need the gradient for nodes whose diagonal
    // neighbors fall outside the mask.
    VectorField du = gradient(u);

    grid.for_each_in_domain([&](int i, int j) {
        SymMat2 m;
        m.xx = second_derivative(u, i, j, 1, 0);
        m.yy = second_derivative(u, i, j, 0, 1);

        const bool diag_ok = grid.has_value(i + 1, j + 1) && grid.has_value(i - 1, j + 1) &&
                             grid.has_value(i + 1, j - 1) && grid.has_value(i - 1, j - 1);
        if (diag_ok) {
            const double h2 = grid.h() * grid.h();
            m.xy = (u.at(i + 1, j + 1) - u.at(i - 1, j + 1) - u.at(i + 1, j - 1) +
                    u.at(i - 1, j - 1)) /
                   (4.0 * h2);
        } else {
            // d/dy of u_x and d/dx of u_y, symmetrized.
            const double dxy = [&] {
                const Grid& g = grid;
                auto deriv_of = [&](bool x_component, int di, int dj) {
                    // derivative of gradient component along (di, dj) at (i, j)
                    auto val = [&](int ii, int jj) {
                        return x_component ? du.at(ii, jj).x : du.at(ii, jj).y;
                    };
                    const bool plus = g.has_value(i + di, j + dj);
                    const bool minus = g.has_value(i - di, j - dj);
                    const double h = g.h();
                    if (plus && minus) return (val(i + di, j + dj) - val(i - di, j - dj)) / (2.0 * h);
                    if (plus) return (val(i + di, j + dj) - val(i, j)) / h;
                    if (minus) return (val(i, j) - val(i - di, j - dj)) / h;
                    return 0.0;
                };
                return 0.5 * (deriv_of(true, 0, 1) + deriv_of(false, 1, 0));
            }();
            m.xy = dxy;
        }
        h.at(i, j) = m;
    });
    return h;
}

ScalarField infinity_laplacian(const VectorField& du, const SymMatrixField& d2u) {
    require_same_grid(du.grid(), d2u.grid(), "infinity_laplacian");
    ScalarField out(du.grid_ptr());
    du.grid().for_each_in_domain([&](int i, int j) {
        out.at(i, j) = du.at(i, j).dot(d2u.at(i, j).apply(du.at(i, j)));
    });
    return out;
}

ScalarField normalized_infinity_laplacian(const VectorField& du, const SymMatrixField& d2u) {
    require_same_grid(du.grid(), d2u.grid(), "normalized_infinity_laplacian");
    ScalarField out(du.grid_ptr());
    du.grid().for_each_in_domain([&](int i, int j) {
        const double g2 = du.at(i, j).norm2();
        out.at(i, j) = g2 > 0.0 ? du.at(i, j).dot(d2u.at(i, j).apply(du.at(i, j))) / g2 : 0.0;
    });
    return out;
}

ScalarField mu_field(const VectorField& du, double eps) {
    if (eps < 0.0) throw std::invalid_argument("mu_field: eps must be >= 0");
    ScalarField out(du.grid_ptr());
    du.grid().for_each_in_domain(
        [&](int i, int j) { out.at(i, j) = std::sqrt(du.at(i, j).norm2() + eps); });
    return out;
}

SymMatrixField a_matrix_field(const VectorField& du, double eps, double p) {
    if (eps <= 0.0) {
        bool has_zero = false;
        du.grid().for_each_in_domain([&](int i, int j) {
            if (du.at(i, j).norm2() == 0.0) has_zero = true;
        });
        if (has_zero)
            throw std::invalid_argument("a_matrix_field: eps <= 0 with a vanishing gradient node");
    }
    SymMatrixField out(du.grid_ptr());
    du.grid().for_each_in_domain([&](int i, int j) {
        const Vec2 g = du.at(i, j);
        const double denom = g.norm2() + eps;
        const double c = denom > 0.0 ? (p - 2.0) / denom : 0.0;
        out.at(i, j) = SymMat2{1.0 + c * g.x * g.x, c * g.x * g.y, 1.0 + c * g.y * g.y};
    });
    return out;
}

namespace {

double vs_scale(double z2, double p, double s, double eps) {
    const double q = 0.25 * (p - 2.0 + s);
    const double base = z2 + eps;
    if (base == 0.0) return 0.0;  // only reached for z = 0, eps = 0
    return std::pow(base, q);
}

}  // namespace

Vec2 v_s_eps(const Vec2& z, double p, double s, double eps) {
    if (eps < 0.0) throw std::invalid_argument("v_s_eps: eps must be >= 0");
    const double z2 = z.norm2();
    if (z2 == 0.0 && eps == 0.0) return Vec2{};
    return vs_scale(z2, p, s, eps) * z;
}

Vector v_s_eps(const Vector& z, double p, double s, double eps) {
    if (eps < 0.0) throw std::invalid_argument("v_s_eps: eps must be >= 0");
    const double z2 = z.norm2();
    if (z2 == 0.0 && eps == 0.0) return Vector::zero(z.dim());
    return vs_scale(z2, p, s, eps) * z;
}

Vec2 v_s(const Vec2& z, double p, double s) { return v_s_eps(z, p, s, 0.0); }
Vector v_s(const Vector& z, double p, double s) { return v_s_eps(z, p, s, 0.0); }

namespace {

double vs_inverse_scale(double w2, double p, double s) {
    if (p + s <= 0.0) throw std::invalid_argument("v_s_inverse: requires p + s > 0");
    if (w2 == 0.0) return 0.0;
    // |z| = |w|^{2/(p+s)}, so z = |w|^{2/(p+s) - 1} w.
    return std::pow(w2, 1.0 / (p + s) - 0.5);
}

}  // namespace

Vec2 v_s_inverse(const Vec2& w, double p, double s) { return vs_inverse_scale(w.norm2(), p, s) * w; }

Vector v_s_inverse(const Vector& w, double p, double s) {
    const double c = vs_inverse_scale(w.norm2(), p, s);
    if (c == 0.0) return Vector::zero(w.dim());
    return c * w;
}

VsJacobianField d_v_s_field(const VectorField& du, const SymMatrixField& d2u, double p, double s,
                            double eps) {
    require_same_grid(du.grid(), d2u.grid(), "d_v_s_field");
    if (eps < 0.0) throw std::invalid_argument("d_v_s_field: eps must be >= 0");
    VsJacobianField out;
    out.jacobian = MatrixField(du.grid_ptr());
    const double q = 0.5 * (p - 2.0 + s);
    du.grid().for_each_in_domain([&](int i, int j) {
        const Vec2 g = du.at(i, j);
        const double mu2 = g.norm2() + eps;
        if (mu2 == 0.0) {
            out.singular_nodes.emplace_back(i, j);
            return;
        }
        const SymMat2 H = d2u.at(i, j);
        const Vec2 Hg = H.apply(g);
        const double scale = std::pow(mu2, 0.5 * q);
        const double c = q / mu2;
        Mat2 m;
        m.xx = scale * (H.xx + c * g.x * Hg.x);
        m.xy = scale * (H.xy + c * g.x * Hg.y);
        m.yx = scale * (H.xy + c * g.y * Hg.x);
        m.yy = scale * (H.yy + c * g.y * Hg.y);
        out.jacobian.at(i, j) = m;
    });
    return out;
}

double d_v_s_norm2(double mu, double du_norm2, double d2u_frob2, double d2u_du_norm2, double p,
                   double s) {
    const double q = p - 2.0 + s;
    const double mu2 = mu * mu;
    return std::pow(mu2, 0.5 * q) *
           (d2u_frob2 + q * d2u_du_norm2 / mu2 + 0.25 * q * q * du_norm2 * d2u_du_norm2 / (mu2 * mu2));
}

double hessian_bound_phi(double p, double eps, double mu2, int n) {
    if (n < 2) throw std::invalid_argument("hessian_bound_phi: n must be >= 2");
    const double r = eps / mu2;
    return ((p - 1.0) * (p - 1.0) - 2.0 * r * (p - 1.0) * (p - 2.0) +
            r * r * (p - 2.0) * (p - 2.0)) /
               (n - 1.0) -
           1.0;
}

double hessian_lower_bound_residual(const SymMatrix& d2u, const Vector& du, double p, double eps,
                                    int n) {
    const double g2 = du.norm2();
    const double mu2 = g2 + eps;
    const Vector Hg = d2u.apply(du);
    const double Hg2 = Hg.norm2();
    const double grad_norm_sq = g2 > 0.0 ? Hg2 / g2 : 0.0;
    const double ninf = g2 > 0.0 ? du.dot(Hg) / g2 : 0.0;
    const double phi = hessian_bound_phi(p, eps, mu2 > 0.0 ? mu2 : 1.0, n);
    return d2u.frobenius2() - 2.0 * grad_norm_sq - phi * ninf * ninf;
}

PointwiseReport hessian_lower_bound_check(const VectorField& du, const SymMatrixField& d2u,
                                          double p, double eps, int n, double tolerance,
                                          bool pde_verified) {
    require_same_grid(du.grid(), d2u.grid(), "hessian_lower_bound_check");
    if (eps < 0.0) throw std::invalid_argument("hessian_lower_bound_check: eps must be >= 0");
    PointwiseReport rep;
    rep.tolerance = tolerance;
    rep.unverifiable = !pde_verified;
    rep.min_residual = std::numeric_limits<double>::infinity();
    rep.nc_min_residual = std::numeric_limits<double>::infinity();
    const double nc_cut = 10.0 * std::sqrt(eps);

    du.grid().for_each_interior([&](int i, int j) {
        const Vec2 g = du.at(i, j);
        const SymMat2 H = d2u.at(i, j);
        const double g2 = g.norm2();
        const double mu2 = g2 + eps;
        const Vec2 Hg = H.apply(g);
        const double Hg2 = Hg.norm2();
        const bool near_critical = g.norm() < nc_cut || mu2 == 0.0;

        // Near critical points the normalization switches to mu^2.
        const double denom = near_critical ? (mu2 > 0.0 ? mu2 : 1.0) : g2;
        const double grad_norm_sq = Hg2 / denom;
        const double ninf = g.dot(Hg) / denom;
        const double phi = hessian_bound_phi(p, eps, mu2 > 0.0 ? mu2 : 1.0, n);
        const double residual = H.frobenius2() - 2.0 * grad_norm_sq - phi * ninf * ninf;

        if (near_critical) {
            ++rep.nc_count;
            if (residual < rep.nc_min_residual) rep.nc_min_residual = residual;
            if (residual < -tolerance) ++rep.nc_violation_count;
            return;
        }
        ++rep.checked_nodes;
        if (residual < rep.min_residual) {
            rep.min_residual = residual;
            rep.argmin_i = i;
            rep.argmin_j = j;
        }
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(residual));
        if (residual < -tolerance) ++rep.violation_count;
    });
    if (rep.checked_nodes == 0) rep.min_residual = 0.0;
    if (rep.nc_count == 0) rep.nc_min_residual = 0.0;
    return rep;
}

ScalarField nondivergence_residual(const ScalarField& u, double p, double eps) {
    if (eps < 0.0) throw std::invalid_argument("nondivergence_residual: eps must be >= 0");
    const VectorField du = gradient(u);
    const SymMatrixField d2u = hessian(u);
    ScalarField out(u.grid_ptr());
    u.grid().for_each_interior([&](int i, int j) {
        const Vec2 g = du.at(i, j);
        const SymMat2 H = d2u.at(i, j);
        const double mu2 = g.norm2() + eps;
        const double inf_lap = g.dot(H.apply(g));
        out.at(i, j) = H.trace() + (mu2 > 0.0 ? (p - 2.0) * inf_lap / mu2 : 0.0);
    });
    return out;
}

ScalarField linearized_residual(const ScalarField& u, double p, double eps, int axis) {
    if (axis != 0 && axis != 1) throw std::invalid_argument("linearized_residual: axis must be 0 or 1");
    if (eps <= 0.0) throw std::invalid_argument("linearized_residual: eps must be > 0");
    const Grid& grid = u.grid();
    const double h = grid.h();

    const VectorField du = gradient(u);
    ScalarField v(u.grid_ptr());
    grid.for_each_in_domain(
        [&](int i, int j) { v.at(i, j) = axis == 0 ? du.at(i, j).x : du.at(i, j).y; });
    const VectorField dv = gradient(v);

    // Node coefficients K = mu^{p-2} A.
    SymMatrixField K(u.grid_ptr());
    grid.for_each_in_domain([&](int i, int j) {
        const Vec2 g = du.at(i, j);
        const double mu2 = g.norm2() + eps;
        const double w = std::pow(mu2, 0.5 * (p - 2.0));
        const double c = (p - 2.0) / mu2;
        K.at(i, j) = SymMat2{w * (1.0 + c * g.x * g.x), w * c * g.x * g.y, w * (1.0 + c * g.y * g.y)};
    });

    ScalarField out(u.grid_ptr());
    grid.for_each_interior([&](int i, int j) {
        auto flux_x = [&](int i0) {  // face between (i0, j) and (i0+1, j)
            const double kxx = 0.5 * (K.at(i0, j).xx + K.at(i0 + 1, j).xx);
            const double kxy = 0.5 * (K.at(i0, j).xy + K.at(i0 + 1, j).xy);
            const double vx = (v.at(i0 + 1, j) - v.at(i0, j)) / h;
            const double vy = 0.5 * (dv.at(i0, j).y + dv.at(i0 + 1, j).y);
            return kxx * vx + kxy * vy;
        };
        auto flux_y = [&](int j0) {  // face between (i, j0) and (i, j0+1)
            const double kyy = 0.5 * (K.at(i, j0).yy + K.at(i, j0 + 1).yy);
            const double kxy = 0.5 * (K.at(i, j0).xy + K.at(i, j0 + 1).xy);
            const double vy = (v.at(i, j0 + 1) - v.at(i, j0)) / h;
            const double vx = 0.5 * (dv.at(i, j0).x + dv.at(i, j0 + 1).x);
            return kyy * vy + kxy * vx;
        };
        out.at(i, j) = (flux_x(i) - flux_x(i - 1)) / h + (flux_y(j) - flux_y(j - 1)) / h;
    });
    return out;
}

}  // namespace plab
