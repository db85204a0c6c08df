#pragma once

#include "plab/grid.hpp"
#include "plab/linalg.hpp"

namespace plab {

/// Closed-form reference solutions with exact derivatives.
///
///  - linear:        u = <a, x> + b            (p-harmonic for every p)
///  - radial_power:  u = |x - c|^beta, beta = (p-n)/(p-1), p != n
///  - radial_log:    u = log |x - c|           (p-harmonic when p == n)
///  - harmonic_poly: u = Re((x + i y)^degree)  (harmonic; 2-D only)
///
/// Evaluation is dimension-generic: the dimension is read off the query
/// point, which for radial_power fixes the exponent through n.
class ExactSolution {
  public:
    enum class Kind { linear, radial_power, radial_log, harmonic_poly };

    static ExactSolution linear(Vector a, double b);
    static ExactSolution radial_power(Vector center, double p);
    static ExactSolution radial_log(Vector center);
    static ExactSolution harmonic_poly(int degree);

    Kind kind() const { return kind_; }
    double p() const { return p_; }
    const Vector& center() const { return center_; }
    int degree() const { return degree_; }

    struct PointValues {
        double u;
        Vector du;
        SymMatrix d2u;
    };

    /// Rejects evaluation at the radial center and dimension mismatches
    /// (including radial_power with p == n, where the exponent degenerates).
    PointValues eval(const Vector& point) const;

    double value(const Vector& point) const { return eval(point).u; }

  private:
    Kind kind_;
    Vector a_;
    double b_ = 0.0;
    Vector center_;
    int degree_ = 0;
    double p_ = 0.0;
};

/// Samplers onto 2-D grids (values on interior and boundary nodes).
ScalarField sample_scalar(const ExactSolution& sol, std::shared_ptr<const Grid> grid);
VectorField sample_gradient(const ExactSolution& sol, std::shared_ptr<const Grid> grid);
SymMatrixField sample_hessian(const ExactSolution& sol, std::shared_ptr<const Grid> grid);

}  // namespace plab
