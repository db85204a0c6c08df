#include "plab/exact_solutions.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace plab {

ExactSolution ExactSolution::linear(Vector a, double b) {
    ExactSolution s;
    s.kind_ = Kind::linear;
    s.a_ = std::move(a);
    s.b_ = b;
    return s;
}

ExactSolution ExactSolution::radial_power(Vector center, double p) {
    if (p <= 1.0) throw std::invalid_argument("ExactSolution::radial_power: p must be > 1");
    ExactSolution s;
    s.kind_ = Kind::radial_power;
    s.center_ = std::move(center);
    s.p_ = p;
    return s;
}

ExactSolution ExactSolution::radial_log(Vector center) {
    ExactSolution s;
    s.kind_ = Kind::radial_log;
    s.center_ = std::move(center);
    return s;
}

ExactSolution ExactSolution::harmonic_poly(int degree) {
    if (degree < 1) throw std::invalid_argument("ExactSolution::harmonic_poly: degree must be >= 1");
    ExactSolution s;
    s.kind_ = Kind::harmonic_poly;
    s.degree_ = degree;
    return s;
}

namespace {

ExactSolution::PointValues radial_values(const Vector& x, const Vector& center, double beta,
                                         bool log_kind) {
    const int n = x.dim();
    Vector d = x - center;
    const double r2 = d.norm2();
    if (r2 == 0.0)
        throw std::invalid_argument("ExactSolution: evaluation at the radial center");
    const double r = std::sqrt(r2);

    ExactSolution::PointValues out{0.0, Vector(n), SymMatrix(n)};
    if (log_kind) {
        // u = log r, Du = d / r^2, D2u = I/r^2 - 2 d (x) d / r^4.
        out.u = std::log(r);
        out.du = (1.0 / r2) * d;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = (i == j ? 1.0 / r2 : 0.0) - 2.0 * d[i] * d[j] / (r2 * r2);
                out.d2u.set(i, j, v);
            }
        return out;
    }
    // u = r^beta, Du = beta r^{beta-2} d,
    // D2u = beta r^{beta-2} I + beta (beta-2) r^{beta-4} d (x) d.
    const double rb2 = std::pow(r, beta - 2.0);
    out.u = std::pow(r, beta);
    out.du = (beta * rb2) * d;
    const double c2 = beta * (beta - 2.0) * std::pow(r, beta - 4.0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            out.d2u.set(i, j, (i == j ? beta * rb2 : 0.0) + c2 * d[i] * d[j]);
    return out;
}

}  // namespace

ExactSolution::PointValues ExactSolution::eval(const Vector& point) const {
    const int n = point.dim();
    switch (kind_) {
        case Kind::linear: {
            if (a_.dim() != n)
                throw std::invalid_argument("ExactSolution::eval: dimension mismatch");
            return PointValues{a_.dot(point) + b_, a_, SymMatrix(n)};
        }
        case Kind::radial_power: {
            if (center_.dim() != n)
                throw std::invalid_argument("ExactSolution::eval: dimension mismatch");
            if (std::abs(p_ - n) < 1e-12)
                throw std::invalid_argument(
                    "ExactSolution::radial_power: p == n degenerates; use radial_log");
            const double beta = (p_ - n) / (p_ - 1.0);
            return radial_values(point, center_, beta, false);
        }
        case Kind::radial_log: {
            if (center_.dim() != n)
                throw std::invalid_argument("ExactSolution::eval: dimension mismatch");
            return radial_values(point, center_, 0.0, true);
        }
        case Kind::harmonic_poly: {
            if (n != 2)
                throw std::invalid_argument("ExactSolution::harmonic_poly: 2-D only");
            const std::complex<double> z(point[0], point[1]);
            const std::complex<double> w = std::pow(z, degree_);
            const std::complex<double> dw =
                degree_ >= 1 ? static_cast<double>(degree_) * std::pow(z, degree_ - 1)
                             : std::complex<double>(0.0);
            const std::complex<double> d2w =
                degree_ >= 2
                    ? static_cast<double>(degree_) * static_cast<double>(degree_ - 1) *
                          std::pow(z, degree_ - 2)
                    : std::complex<double>(0.0);
            PointValues out{w.real(), Vector(2), SymMatrix(2)};
            // u = Re f(z): Du = (Re f', -Im f'), D2u = [[Re f'', -Im f''], [-Im f'', -Re f'']].
            out.du[0] = dw.real();
            out.du[1] = -dw.imag();
            out.d2u.set(0, 0, d2w.real());
            out.d2u.set(0, 1, -d2w.imag());
            out.d2u.set(1, 1, -d2w.real());
            return out;
        }
    }
    throw std::logic_error("ExactSolution::eval: unreachable");
}

namespace {

Vector to_vec(const Vec2& v) {
    Vector out(2);
    out[0] = v.x;
    out[1] = v.y;
    return out;
}

}  // namespace

ScalarField sample_scalar(const ExactSolution& sol, std::shared_ptr<const Grid> grid) {
    ScalarField f(grid);
    grid->for_each_in_domain([&](int i, int j) { f.at(i, j) = sol.value(to_vec(grid->pos(i, j))); });
    assert_finite(f, "sample_scalar");
    return f;
}

VectorField sample_gradient(const ExactSolution& sol, std::shared_ptr<const Grid> grid) {
    VectorField f(grid);
    grid->for_each_in_domain([&](int i, int j) {
        const Vector g = sol.eval(to_vec(grid->pos(i, j))).du;
        f.at(i, j) = Vec2{g[0], g[1]};
    });
    assert_finite(f, "sample_gradient");
    return f;
}

SymMatrixField sample_hessian(const ExactSolution& sol, std::shared_ptr<const Grid> grid) {
    SymMatrixField f(grid);
    grid->for_each_in_domain([&](int i, int j) {
        const SymMatrix h = sol.eval(to_vec(grid->pos(i, j))).d2u;
        f.at(i, j) = SymMat2{h(0, 0), h(0, 1), h(1, 1)};
    });
    assert_finite(f, "sample_hessian");
    return f;
}

}  // namespace plab
