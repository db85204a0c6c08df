#include "plab/estimates.hpp"

#include "plab/rng.hpp"
#include "plab/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

namespace plab {

namespace {

/// Quintic smoothstep on [0, 1].
double smoothstep5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smoothstep5_deriv(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }

}  // namespace

Cutoff::Cutoff(Ball ball, std::shared_ptr<const Grid> grid)
    : ball_(ball), grid_(std::move(grid)), phi_nodes_(grid_), dphi_nodes_(grid_) {
    grid_->for_each_in_domain([&](int i, int j) {
        const Vec2 x = grid_->pos(i, j);
        phi_nodes_.at(i, j) = phi(x);
        dphi_nodes_.at(i, j) = dphi(x);
    });
}

double Cutoff::phi(const Vec2& x) const {
    const double t = (x - ball_.center).norm() / ball_.r;
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    return 1.0 - smoothstep5(t - 1.0);
}

Vec2 Cutoff::dphi(const Vec2& x) const {
    const Vec2 d = x - ball_.center;
    const double rho = d.norm();
    const double t = rho / ball_.r;
    if (t <= 1.0 || t >= 2.0 || rho == 0.0) return Vec2{};
    const double dpsi = -smoothstep5_deriv(t - 1.0) / ball_.r;
    return (dpsi / rho) * d;
}

bool ball_inside_interior(const Grid& grid, const Vec2& center, double radius) {
    bool ok = true;
    const double r2 = radius * radius;
    for (int j = 0; j <= grid.ny() && ok; ++j)
        for (int i = 0; i <= grid.nx() && ok; ++i) {
            if ((grid.pos(i, j) - center).norm2() < r2 && !grid.is_interior(i, j)) ok = false;
        }
    // The ball must also stay inside the grid rectangle itself.
    const Vec2 lo = grid.pos(0, 0);
    const Vec2 hi = grid.pos(grid.nx(), grid.ny());
    if (center.x - radius < lo.x || center.x + radius > hi.x || center.y - radius < lo.y ||
        center.y + radius > hi.y)
        ok = false;
    return ok;
}

Cutoff build_cutoff(const Ball& ball, std::shared_ptr<const Grid> grid) {
    if (ball.r <= 0.0) throw std::invalid_argument("build_cutoff: radius must be positive");
    if (!ball_inside_interior(*grid, ball.center, 2.0 * ball.r))
        throw std::invalid_argument("build_cutoff: B_2r does not fit inside the grid interior");
    return Cutoff(ball, std::move(grid));
}

namespace {

template <typename T>
T ball_mean_impl(const NodeField<T>& f, const Ball& ball) {
    const Grid& g = f.grid();
    const double r2 = ball.r * ball.r;
    T sum{};
    long count = 0;
    g.for_each_in_domain([&](int i, int j) {
        if ((g.pos(i, j) - ball.center).norm2() < r2) {
            sum += f.at(i, j);
            ++count;
        }
    });
    if (count == 0) throw std::invalid_argument("integral_average: ball captures no nodes");
    return (1.0 / static_cast<double>(count)) * sum;
}

}  // namespace

double integral_average(const ScalarField& f, const Ball& ball) {
    const Grid& g = f.grid();
    const double r2 = ball.r * ball.r;
    double sum = 0.0;
    long count = 0;
    g.for_each_in_domain([&](int i, int j) {
        if ((g.pos(i, j) - ball.center).norm2() < r2) {
            sum += f.at(i, j);
            ++count;
        }
    });
    if (count == 0) throw std::invalid_argument("integral_average: ball captures no nodes");
    return sum / static_cast<double>(count);
}

Vec2 integral_average(const VectorField& f, const Ball& ball) { return ball_mean_impl(f, ball); }

FieldBundle FieldBundle::from_scalar(ScalarField u, double p, double eps) {
    FieldBundle b;
    b.grid = u.grid_ptr();
    b.du = gradient(u);
    b.d2u = hessian(u);
    b.p = p;
    b.eps = eps;
    b.derivatives_analytic = false;
    const ScalarField res = nondivergence_residual(u, p, eps);
    double m = 0.0;
    b.grid->for_each_interior([&](int i, int j) { m = std::max(m, std::abs(res.at(i, j))); });
    b.pde_residual_max = m;
    b.u = std::move(u);
    return b;
}

FieldBundle FieldBundle::from_exact(const ExactSolution& sol, std::shared_ptr<const Grid> grid,
                                    double p) {
    FieldBundle b;
    b.grid = grid;
    b.u = sample_scalar(sol, grid);
    b.du = sample_gradient(sol, grid);
    b.d2u = sample_hessian(sol, grid);
    b.p = p;
    b.eps = 0.0;
    b.derivatives_analytic = true;
    b.pde_residual_max = 0.0;
    return b;
}

namespace {

struct NodeQuantities {
    double mu2;        // |Du|^2 + eps
    double du2;        // |Du|^2
    double d2u_frob2;  // |D2u|^2
    double hgrad2;     // |D2u Du|^2
    double inf_lap;    // <Du, D2u Du>
};

NodeQuantities node_quantities(const FieldBundle& f, int i, int j) {
    const Vec2 g = f.du.at(i, j);
    const SymMat2 H = f.d2u.at(i, j);
    const Vec2 Hg = H.apply(g);
    NodeQuantities q;
    q.du2 = g.norm2();
    q.mu2 = q.du2 + f.eps;
    q.d2u_frob2 = H.frobenius2();
    q.hgrad2 = Hg.norm2();
    q.inf_lap = g.dot(Hg);
    return q;
}

/// mu^power with the convention 0^0 = 1 and a hard error on 0^{negative}
/// (only reachable with eps = 0 at a critical point; the integrands that
/// use negative powers multiply by quantities vanishing there, so callers
/// pass the product through safe_mu_pow_times).
double mu_pow(double mu2, double power) {
    if (mu2 == 0.0) return power == 0.0 ? 1.0 : 0.0;
    return std::pow(mu2, 0.5 * power);
}

/// value * mu^power, evaluated as 0 when value == 0 (degenerate critical
/// nodes contribute nothing even when the weight alone would blow up).
double mu_pow_times(double value, double mu2, double power) {
    if (value == 0.0) return 0.0;
    return value * mu_pow(mu2, power);
}

double cutoff_weighted_integral(const FieldBundle& f, const Cutoff& cutoff,
                                const std::function<double(int, int)>& integrand,
                                bool weight_phi2) {
    const Grid& g = *f.grid;
    const double cell = g.h() * g.h();
    const double outer2 = 4.0 * cutoff.ball().r * cutoff.ball().r;
    double total = 0.0;
    g.for_each_interior([&](int i, int j) {
        if ((g.pos(i, j) - cutoff.ball().center).norm2() >= outer2) return;
        const double w = weight_phi2 ? cutoff.phi_at(i, j) * cutoff.phi_at(i, j)
                                     : cutoff.dphi_at(i, j).norm2();
        if (w == 0.0) return;
        total += w * integrand(i, j) * cell;
    });
    return total;
}

double ball_integral(const FieldBundle& f, const Ball& ball,
                     const std::function<double(int, int)>& integrand) {
    const Grid& g = *f.grid;
    const double cell = g.h() * g.h();
    const double r2 = ball.r * ball.r;
    double total = 0.0;
    g.for_each_interior([&](int i, int j) {
        if ((g.pos(i, j) - ball.center).norm2() < r2) total += integrand(i, j) * cell;
    });
    return total;
}

void fill_ratio(RatioReport& rep, const FieldBundle& f) {
    rep.p = f.p;
    rep.eps = f.eps;
    rep.h = f.grid->h();
    if (rep.rhs > 0.0) {
        rep.empirical_C = rep.lhs / rep.rhs;
    } else if (rep.lhs > 0.0) {
        rep.rhs_zero_violation = true;
        rep.empirical_C = std::numeric_limits<double>::infinity();
    } else {
        rep.trivial = true;
        rep.empirical_C = 0.0;
    }
}

}  // namespace

RatioReport caccioppoli_basic(const FieldBundle& f, const Cutoff& cutoff, std::optional<Vec2> z) {
    Vec2 zv;
    if (z.has_value()) {
        zv = *z;
    } else {
        // Weighted mean of Du with weight mu^{p-2} |Dphi|^2: the constant
        // that minimizes the right-hand side.
        double wsum = 0.0;
        Vec2 acc;
        const Grid& g = *f.grid;
        g.for_each_interior([&](int i, int j) {
            const double dphi2 = cutoff.dphi_at(i, j).norm2();
            if (dphi2 == 0.0) return;
            const auto q = node_quantities(f, i, j);
            const double w = mu_pow(q.mu2, f.p - 2.0) * dphi2;
            acc += w * f.du.at(i, j);
            wsum += w;
        });
        if (wsum > 0.0) zv = (1.0 / wsum) * acc;
    }

    RatioReport rep;
    rep.ball = cutoff.ball();
    rep.lhs = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow_times(q.d2u_frob2, q.mu2, f.p - 2.0);
        },
        true);
    rep.rhs = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow_times((f.du.at(i, j) - zv).norm2(), q.mu2, f.p - 2.0);
        },
        false);
    fill_ratio(rep, f);
    return rep;
}

WeightedCaccioppoliReport caccioppoli_weighted(const FieldBundle& f, double s, double eta,
                                               const Cutoff& cutoff) {
    if (eta <= 0.0) throw std::invalid_argument("caccioppoli_weighted: eta must be > 0");
    WeightedCaccioppoliReport rep;
    rep.p = f.p;
    rep.s = s;
    rep.eps = f.eps;
    rep.eta = eta;
    rep.h = f.grid->h();
    rep.ball = cutoff.ball();

    rep.I1 = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow_times(q.d2u_frob2, q.mu2, f.p - 2.0 + s);
        },
        true);
    rep.I2 = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow_times(q.hgrad2, q.mu2, f.p - 4.0 + s);
        },
        true);
    rep.I3 = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow_times(q.inf_lap * q.inf_lap, q.mu2, f.p - 6.0 + s);
        },
        true);
    rep.rhs = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow(q.mu2, f.p + s);
        },
        false);

    rep.combination = rep.I1 + (f.p - 2.0 + s - eta) * rep.I2 + (s * (f.p - 2.0) - eta) * rep.I3;
    if (rep.rhs > 0.0)
        rep.empirical_C = eta * std::max(rep.combination, 0.0) / rep.rhs;
    else if (rep.combination > 0.0)
        rep.rhs_zero_violation = true;
    return rep;
}

RatioReport hessian_energy_bound(const FieldBundle& f, double s, const Cutoff& cutoff) {
    const WeightedCaccioppoliReport w = caccioppoli_weighted(f, s, 1.0, cutoff);
    RatioReport rep;
    rep.ball = cutoff.ball();
    rep.lhs = w.I1;
    rep.rhs = w.I2 + w.rhs;
    fill_ratio(rep, f);
    rep.s = s;
    return rep;
}

RatioReport main_energy_ratio(const FieldBundle& f, double s, const Cutoff& cutoff) {
    RatioReport rep;
    rep.ball = cutoff.ball();
    rep.lhs = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            if (q.mu2 == 0.0) return 0.0;
            return d_v_s_norm2(std::sqrt(q.mu2), q.du2, q.d2u_frob2, q.hgrad2, f.p, s);
        },
        true);
    rep.rhs = cutoff_weighted_integral(
        f, cutoff,
        [&](int i, int j) {
            const auto q = node_quantities(f, i, j);
            return mu_pow(q.mu2, f.p + s);
        },
        false);
    fill_ratio(rep, f);
    rep.s = s;
    rep.below_threshold = s <= s_threshold(2, f.p);
    return rep;
}

namespace {

/// V_s^eps(Du) sampled on the nodes with the bundle's own eps.
VectorField vs_of_gradient(const FieldBundle& f, double s) {
    VectorField v(f.grid);
    f.grid->for_each_in_domain(
        [&](int i, int j) { v.at(i, j) = v_s_eps(f.du.at(i, j), f.p, s, f.eps); });
    return v;
}

}  // namespace

RatioReport oscillation_ratio(const FieldBundle& f, double s, const Ball& ball,
                              std::optional<Vec2> z) {
    if (!ball_inside_interior(*f.grid, ball.center, 2.0 * ball.r))
        throw std::invalid_argument("oscillation_ratio: B_2r does not fit inside the interior");
    const VectorField vs = vs_of_gradient(f, s);
    const Ball outer{ball.center, 2.0 * ball.r};
    const Vec2 zv = z.has_value() ? *z : integral_average(vs, outer);

    const VsJacobianField jac = d_v_s_field(f.du, f.d2u, f.p, s, f.eps);
    RatioReport rep;
    rep.ball = ball;
    rep.lhs = ball_integral(f, ball,
                            [&](int i, int j) { return jac.jacobian.at(i, j).frobenius2(); });
    rep.rhs = ball_integral(f, outer,
                            [&](int i, int j) { return (vs.at(i, j) - zv).norm2(); }) /
              (ball.r * ball.r);
    fill_ratio(rep, f);
    rep.s = s;
    rep.below_threshold = s <= s_threshold(2, f.p);
    return rep;
}

DegeneracyVerdict degeneracy_classify(const FieldBundle& f, double s, const Ball& ball, double M) {
    if (M < 4.0) throw std::invalid_argument("degeneracy_classify: M must be >= 4");
    if (!ball_inside_interior(*f.grid, ball.center, M * ball.r))
        throw std::invalid_argument("degeneracy_classify: B_Mr does not fit inside the interior");
    const VectorField vs = vs_of_gradient(f, s);
    const Ball b2{ball.center, 2.0 * ball.r};
    const Ball bM{ball.center, M * ball.r};
    const Vec2 mean = integral_average(vs, bM);

    DegeneracyVerdict v;
    v.value_integral = ball_integral(f, b2, [&](int i, int j) { return vs.at(i, j).norm2(); });
    v.oscillation_integral =
        ball_integral(f, bM, [&](int i, int j) { return (vs.at(i, j) - mean).norm2(); });
    v.degenerate = v.value_integral <= v.oscillation_integral;
    return v;
}

ScaleCheck change_of_scale_check(const VectorField& v, const Ball& base, double m, double M,
                                 double kappa) {
    if (!(0.0 < m && m < M)) throw std::invalid_argument("change_of_scale_check: need 0 < m < M");
    if (kappa < m || kappa > M)
        throw std::invalid_argument("change_of_scale_check: kappa must lie in [m, M]");
    const Grid& g = v.grid();
    const Ball bm{base.center, m * base.r};
    const Ball bM{base.center, M * base.r};
    const Ball bk{base.center, kappa * base.r};

    auto sq_integral = [&](const Ball& b, const Vec2& shift) {
        const double r2 = b.r * b.r;
        const double cell = g.h() * g.h();
        double total = 0.0;
        long count = 0;
        g.for_each_in_domain([&](int i, int j) {
            if ((g.pos(i, j) - b.center).norm2() < r2) {
                total += (v.at(i, j) - shift).norm2() * cell;
                ++count;
            }
        });
        if (count == 0)
            throw std::invalid_argument("change_of_scale_check: ball captures no nodes");
        return std::pair<double, long>(total, count);
    };

    const Vec2 meanM = integral_average(v, bM);
    const auto [val_m, cnt_m] = sq_integral(bm, Vec2{});
    const auto [osc_M, cnt_M] = sq_integral(bM, meanM);

    ScaleCheck out;
    out.hypothesis_holds = val_m > osc_M;
    const auto [val_k, cnt_k] = sq_integral(bk, Vec2{});
    const double avg_k = val_k / static_cast<double>(cnt_k);
    const double avg_m = val_m / static_cast<double>(cnt_m);
    out.ratio = avg_m > 0.0 ? avg_k / avg_m
                            : (avg_k > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return out;
}

Comparability vs_comparability(double p, double s, long samples, std::uint64_t seed) {
    if (p + s <= 0.0) throw std::invalid_argument("vs_comparability: requires p + s > 0");
    if (samples < 1) throw std::invalid_argument("vs_comparability: need at least one sample");
    CounterRng rng(seed, /*stream=*/0x7653c0de);
    Comparability out;
    out.c1_hat = std::numeric_limits<double>::infinity();
    out.c2_hat = 0.0;
    const double expo = 0.5 * (p - 2.0 + s);
    long used = 0;
    while (used < samples) {
        const int dim = rng.uniform01() < 0.5 ? 2 : 3;
        const double scale_z = std::pow(10.0, rng.uniform(-4.0, 4.0));
        const double scale_w = std::pow(10.0, rng.uniform(-4.0, 4.0));
        Vector z = rng.gaussian_vector(dim);
        Vector w = rng.gaussian_vector(dim);
        z *= scale_z;
        // Half the draws keep w near z to probe the z -> w limit.
        if (rng.uniform01() < 0.5) {
            w *= 1e-3 * scale_z;
            w += z;
        } else {
            w *= scale_w;
        }
        const double eps = rng.uniform01() < 0.25
                               ? 0.0
                               : std::pow(10.0, rng.uniform(-6.0, 2.0)) * (z.norm2() + w.norm2());
        const Vector dzw = z - w;
        const double d2 = dzw.norm2();
        if (d2 == 0.0) continue;  // z == w carries no information
        const Vector dv = v_s_eps(z, p, s, eps) - v_s_eps(w, p, s, eps);
        const double denom = std::pow(eps + z.norm2() + w.norm2(), expo) * d2;
        if (denom == 0.0) continue;
        const double ratio = dv.norm2() / denom;
        out.c1_hat = std::min(out.c1_hat, ratio);
        out.c2_hat = std::max(out.c2_hat, ratio);
        ++used;
    }
    out.samples = used;
    return out;
}

GradientComparability gradient_comparability_check(const FieldBundle& f, double s,
                                                   const Ball& ball, double sigma, double M) {
    if (f.p + s <= 0.0)
        throw std::invalid_argument("gradient_comparability_check: requires p + s > 0");
    if (sigma <= 0.0) throw std::invalid_argument("gradient_comparability_check: sigma must be > 0");
    GradientComparability out;
    const DegeneracyVerdict verdict = degeneracy_classify(f, s, ball, M);
    out.nondegenerate = !verdict.degenerate;

    const Grid& g = *f.grid;
    const Ball b2{ball.center, 2.0 * ball.r};
    const double r2 = b2.r * b2.r;
    const double ps = f.p + s;

    double mean_pow = 0.0;
    long count = 0;
    g.for_each_in_domain([&](int i, int j) {
        if ((g.pos(i, j) - b2.center).norm2() >= r2) return;
        mean_pow += std::pow(f.du.at(i, j).norm2(), 0.5 * ps);
        ++count;
    });
    if (count == 0)
        throw std::invalid_argument("gradient_comparability_check: ball captures no nodes");
    const double lambda = std::pow(mean_pow / static_cast<double>(count), 1.0 / ps);
    out.lambda = lambda;
    if (lambda == 0.0) {
        out.trivial_lambda_zero = true;
        out.pass = out.nondegenerate;
        return out;
    }

    // Grid stand-in for the mean value theorem: the node realizing |Du|
    // closest to lambda.
    double best = std::numeric_limits<double>::infinity();
    Vec2 du0;
    g.for_each_in_domain([&](int i, int j) {
        if ((g.pos(i, j) - b2.center).norm2() >= r2) return;
        const double dev = std::abs(f.du.at(i, j).norm() - lambda);
        if (dev < best) {
            best = dev;
            out.x0 = g.pos(i, j);
            du0 = f.du.at(i, j);
        }
    });
    out.x0_residual = best;

    double max_dev = 0.0;
    g.for_each_in_domain([&](int i, int j) {
        if ((g.pos(i, j) - b2.center).norm2() >= r2) return;
        max_dev = std::max(max_dev, (f.du.at(i, j) - du0).norm());
    });
    out.max_deviation_ratio = max_dev / lambda;
    out.pass = out.nondegenerate && out.max_deviation_ratio <= sigma;
    return out;
}

std::vector<IntegrabilityRow> higher_integrability_probe(const FieldBundle& f, double s,
                                                         const std::vector<double>& q_grid,
                                                         const Ball& ball) {
    for (double q : q_grid)
        if (q < 1.0 || q > 2.5)
            throw std::invalid_argument("higher_integrability_probe: q must lie in [1, 2.5]");
    if (!ball_inside_interior(*f.grid, ball.center, 2.0 * ball.r))
        throw std::invalid_argument("higher_integrability_probe: B_2r does not fit");

    const VsJacobianField jac = d_v_s_field(f.du, f.d2u, f.p, s, f.eps);
    ScalarField gnorm(f.grid);
    f.grid->for_each_in_domain(
        [&](int i, int j) { gnorm.at(i, j) = std::sqrt(jac.jacobian.at(i, j).frobenius2()); });

    const Ball outer{ball.center, 2.0 * ball.r};
    auto avg_pow = [&](const Ball& b, double q) {
        const Grid& g = *f.grid;
        const double r2 = b.r * b.r;
        double total = 0.0;
        long count = 0;
        g.for_each_in_domain([&](int i, int j) {
            if ((g.pos(i, j) - b.center).norm2() < r2) {
                total += std::pow(gnorm.at(i, j), q);
                ++count;
            }
        });
        return count > 0 ? total / static_cast<double>(count) : 0.0;
    };
    const double denom = std::sqrt(avg_pow(outer, 2.0));

    std::vector<IntegrabilityRow> rows;
    rows.reserve(q_grid.size());
    for (double q : q_grid) {
        IntegrabilityRow row;
        row.q = q;
        const double num = std::pow(avg_pow(ball, q), 1.0 / q);
        row.ratio = denom > 0.0 ? num / denom
                                : (num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace plab
