#pragma once

#include "plab/grid.hpp"
#include "plab/linalg.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace plab {

/// Central differences at nodes with both axis neighbors; second-order
/// one-sided stencils where only one side carries values (domain edges).
/// Exact on polynomials of degree <= 2 wherever a three-point stencil is
/// available.
VectorField gradient(const ScalarField& u);

/// Three-point second differences on the diagonal, the four-point cross
/// stencil off the diagonal (with a nested-difference fallback where a
/// diagonal neighbor is missing). Symmetric by construction.
SymMatrixField hessian(const ScalarField& u);

/// <Du, D2u Du> per node.
ScalarField infinity_laplacian(const VectorField& du, const SymMatrixField& d2u);

/// <Du, D2u Du> / |Du|^2 where Du != 0, and 0 where Du = 0.
ScalarField normalized_infinity_laplacian(const VectorField& du, const SymMatrixField& d2u);

/// mu = sqrt(|Du|^2 + eps).
ScalarField mu_field(const VectorField& du, double eps);

/// A = I + (p-2) Du (x) Du / (|Du|^2 + eps). Eigenvalues lie in
/// [min{1, p-1}, max{1, p-1}]. Rejects eps <= 0 when Du vanishes somewhere.
SymMatrixField a_matrix_field(const VectorField& du, double eps, double p);

/// V_s(z) = |z|^{(p-2+s)/2} z for z != 0, and 0 at z = 0.
Vec2 v_s(const Vec2& z, double p, double s);
Vector v_s(const Vector& z, double p, double s);

/// Regularized version V_s^eps(z) = (|z|^2 + eps)^{(p-2+s)/4} z;
/// eps = 0 recovers v_s.
Vec2 v_s_eps(const Vec2& z, double p, double s, double eps);
Vector v_s_eps(const Vector& z, double p, double s, double eps);

/// Inverse of v_s; requires p + s > 0 (|V_s(z)| = |z|^{(p+s)/2} is then
/// strictly increasing).
Vec2 v_s_inverse(const Vec2& w, double p, double s);
Vector v_s_inverse(const Vector& w, double p, double s);

/// Chain-rule Jacobian of V_s^eps(Du):
///   D(V_s^eps(Du)) = mu^{(p-2+s)/2} (D2u + (p-2+s)/2 * Du (x) (D2u Du) / mu^2).
/// Nodes with eps = 0 and Du = 0 have no Jacobian; they are zeroed and
/// listed in singular_nodes.
struct VsJacobianField {
    MatrixField jacobian;
    std::vector<std::pair<int, int>> singular_nodes;
};
VsJacobianField d_v_s_field(const VectorField& du, const SymMatrixField& d2u, double p, double s,
                            double eps);

/// Closed form for |D(V_s^eps(Du))|^2 from the derivative quantities; agrees
/// with the squared Frobenius norm of the Jacobian to rounding error.
double d_v_s_norm2(double mu, double du_norm2, double d2u_frob2, double d2u_du_norm2, double p,
                   double s);

/// Outcome of a nodewise inequality check. Nodes with |Du| < 10*sqrt(eps)
/// are tallied separately (nc_*): close to a critical point the normalized
/// quantities switch to the regularized denominator mu^2.
struct PointwiseReport {
    double min_residual = 0.0;
    int argmin_i = -1;
    int argmin_j = -1;
    long violation_count = 0;
    double max_abs_residual = 0.0;
    long checked_nodes = 0;
    double tolerance = 0.0;

    long nc_count = 0;
    double nc_min_residual = 0.0;
    long nc_violation_count = 0;

    bool unverifiable = false;  ///< input did not solve the PDE to tolerance
};

/// Pointwise residual of the Hessian lower bound
///   |D2u|^2 >= 2 |D|Du||^2 + Phi * (normalized infinity Laplacian)^2
/// with Phi = (p-1)^2/(n-1) - 1 - (eps/mu^2) 2(p-1)(p-2)/(n-1)
///            + (eps^2/mu^4) (p-2)^2/(n-1),
/// where |D|Du||^2 = |D2u Du|^2/|Du|^2. Valid for fields that solve the
/// regularized equation; equality when n = 2.
PointwiseReport hessian_lower_bound_check(const VectorField& du, const SymMatrixField& d2u,
                                          double p, double eps, int n, double tolerance,
                                          bool pde_verified = true);

/// Same residual evaluated on n-dimensional point data (for synthetic
/// closed-form fields in dimensions the grid engine does not solve).
double hessian_lower_bound_residual(const SymMatrix& d2u, const Vector& du, double p, double eps,
                                    int n);

/// Phi coefficient of the Hessian lower bound at a point with given mu^2.
double hessian_bound_phi(double p, double eps, double mu2, int n);

/// Pointwise residual of the non-divergence form
///   tr(D2u) + (p-2) <Du, D2u Du> / (|Du|^2 + eps)
/// on interior nodes (zero on boundary nodes). The second term is dropped
/// where |Du|^2 + eps vanishes.
ScalarField nondivergence_residual(const ScalarField& u, double p, double eps);

/// Discrete flux divergence of mu^{p-2} A D(u_{x_k}) with face-averaged
/// coefficients, on interior nodes; axis = 0 for x, 1 for y. Reduces to the
/// five-point Laplacian of u_{x_k} when p = 2.
ScalarField linearized_residual(const ScalarField& u, double p, double eps, int axis);

}  // namespace plab
