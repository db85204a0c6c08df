#pragma once

#include "plab/exact_solutions.hpp"
#include "plab/field_calculus.hpp"
#include "plab/grid.hpp"

#include <optional>
#include <vector>

namespace plab {

struct Ball {
    Vec2 center;
    double r = 0.0;
};

/// Radial cutoff: phi = 1 on B_r, phi = 0 outside B_{2r}, quintic smoothstep
/// transition in between. The profile maximum of |phi'| is 15/8, so
/// |Dphi| <= 1.875 / r, well under the 10 / r budget.
class Cutoff {
  public:
    Cutoff(Ball ball, std::shared_ptr<const Grid> grid);

    const Ball& ball() const { return ball_; }
    const Grid& grid() const { return *grid_; }

    double phi(const Vec2& x) const;
    Vec2 dphi(const Vec2& x) const;  // analytic gradient of the radial profile

    double phi_at(int i, int j) const { return phi_nodes_.at(i, j); }
    const Vec2& dphi_at(int i, int j) const { return dphi_nodes_.at(i, j); }

  private:
    Ball ball_;
    std::shared_ptr<const Grid> grid_;
    ScalarField phi_nodes_;
    VectorField dphi_nodes_;
};

/// Validates that B_{2r} sits strictly inside the grid interior and samples
/// the cutoff on the nodes. Rejects balls whose doubled radius leaves the
/// interior.
Cutoff build_cutoff(const Ball& ball, std::shared_ptr<const Grid> grid);

/// True when every node within distance `radius` of the center is interior.
bool ball_inside_interior(const Grid& grid, const Vec2& center, double radius);

/// Cell-area-weighted mean over nodes with |x - center| < r. Rejects balls
/// that capture no nodes.
double integral_average(const ScalarField& f, const Ball& ball);
Vec2 integral_average(const VectorField& f, const Ball& ball);

/// A solution plus its derivative fields, as consumed by every estimate.
/// `eps` is the regularization the fields were produced with (0 for exact
/// closed-form bundles, whose derivatives are analytic).
struct FieldBundle {
    std::shared_ptr<const Grid> grid;
    ScalarField u;
    VectorField du;
    SymMatrixField d2u;
    double p = 2.0;
    double eps = 0.0;
    bool derivatives_analytic = false;
    double pde_residual_max = 0.0;  ///< sup |non-divergence residual| over interior

    static FieldBundle from_scalar(ScalarField u, double p, double eps);
    static FieldBundle from_exact(const ExactSolution& sol, std::shared_ptr<const Grid> grid,
                                  double p);
};

struct RatioReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double empirical_C = 0.0;    ///< lhs / rhs; 0 when both sides vanish
    bool rhs_zero_violation = false;  ///< rhs == 0 while lhs > 0
    bool trivial = false;        ///< both sides vanish
    bool below_threshold = false;  ///< s outside the contracted regime (diagnostic only)
    double p = 0.0, s = 0.0, eps = 0.0, h = 0.0;
    Ball ball;
};

/// Basic Caccioppoli estimate:
///   lhs = int mu^{p-2} |D2u|^2 phi^2,  rhs = int mu^{p-2} |Du - z|^2 |Dphi|^2.
/// z defaults to the rhs-weight-minimizing constant (the weighted mean of Du).
RatioReport caccioppoli_basic(const FieldBundle& f, const Cutoff& cutoff,
                              std::optional<Vec2> z = std::nullopt);

/// Weighted Caccioppoli estimate: the three left-hand integrals
///   I1 = int |D2u|^2 mu^{p-2+s} phi^2,
///   I2 = int |D2u Du|^2 mu^{p-4+s} phi^2,
///   I3 = int (infinity Laplacian)^2 mu^{p-6+s} phi^2,
/// combined as I1 + (p-2+s-eta) I2 + (s(p-2)-eta) I3, against
///   rhs = int mu^{p+s} |Dphi|^2. Rejects eta <= 0.
struct WeightedCaccioppoliReport {
    double I1 = 0.0, I2 = 0.0, I3 = 0.0;
    double combination = 0.0;
    double rhs = 0.0;
    double empirical_C = 0.0;  ///< eta * max(combination, 0) / rhs
    bool rhs_zero_violation = false;
    double p = 0.0, s = 0.0, eps = 0.0, eta = 0.0, h = 0.0;
    Ball ball;
};
WeightedCaccioppoliReport caccioppoli_weighted(const FieldBundle& f, double s, double eta,
                                               const Cutoff& cutoff);

/// Hessian energy bound: lhs = I1, rhs = I2 + int mu^{p+s} |Dphi|^2.
RatioReport hessian_energy_bound(const FieldBundle& f, double s, const Cutoff& cutoff);

/// Contracted energy estimate:
///   lhs = int |D(V_s^eps(Du))|^2 phi^2,  rhs = int mu^{p+s} |Dphi|^2.
/// Below the s-threshold the ratio is still reported, flagged diagnostic.
RatioReport main_energy_ratio(const FieldBundle& f, double s, const Cutoff& cutoff);

/// Oscillation estimate on concentric balls:
///   lhs = int_{B_r} |D(V_s(Du))|^2,
///   rhs = (1/r^2) int_{B_2r} |V_s(Du) - z|^2,
/// z defaulting to the B_{2r}-average of V_s(Du).
RatioReport oscillation_ratio(const FieldBundle& f, double s, const Ball& ball,
                              std::optional<Vec2> z = std::nullopt);

/// Degeneracy dichotomy at scale M: a ball is degenerate when
///   int_{B_2r} |V_s(Du)|^2  <=  int_{B_Mr} |V_s(Du) - mean|^2
/// (ties classified degenerate). Rejects M < 4 or B_{Mr} outside the grid.
struct DegeneracyVerdict {
    bool degenerate = false;
    double value_integral = 0.0;        ///< int_{B_2r} |V_s(Du)|^2
    double oscillation_integral = 0.0;  ///< int_{B_Mr} |V_s(Du) - mean|^2
};
DegeneracyVerdict degeneracy_classify(const FieldBundle& f, double s, const Ball& ball, double M);

/// Change-of-scale bound: when int_{B_mr} |v|^2 > int_{B_Mr} |v - mean|^2,
/// the averages satisfy avg_{B_kr} |v|^2 <= 9 avg_{B_mr} |v|^2 for any
/// kappa in [m, M]. `ratio` is that quotient; vacuous when the hypothesis
/// fails.
struct ScaleCheck {
    bool hypothesis_holds = false;
    double ratio = 0.0;
};
ScaleCheck change_of_scale_check(const VectorField& v, const Ball& base, double m, double M,
                                 double kappa);

/// Empirical comparability constants of the regularized V_s:
///   ratio(z, w, eps) = |V_s^eps(z) - V_s^eps(w)|^2
///                      / ((eps + |z|^2 + |w|^2)^{(p-2+s)/2} |z - w|^2),
/// minimized / maximized over random (z, w, eps) pairs across magnitudes
/// from 1e-4 to 1e4 in dimensions 2 and 3. Requires p + s > 0.
struct Comparability {
    double c1_hat = 0.0;
    double c2_hat = 0.0;
    long samples = 0;
};
Comparability vs_comparability(double p, double s, long samples, std::uint64_t seed);

/// Gradient comparability on a non-degenerate ball: with
/// lambda = (avg_{B_2r} |Du|^{p+s})^{1/(p+s)} and x0 the node whose |Du| is
/// closest to lambda, reports max_{B_2r} |Du - Du(x0)| / lambda.
struct GradientComparability {
    bool nondegenerate = false;
    bool trivial_lambda_zero = false;
    double lambda = 0.0;
    Vec2 x0;
    double x0_residual = 0.0;  ///< | |Du(x0)| - lambda |
    double max_deviation_ratio = 0.0;
    bool pass = false;  ///< nondegenerate and ratio <= sigma
};
GradientComparability gradient_comparability_check(const FieldBundle& f, double s,
                                                   const Ball& ball, double sigma, double M);

/// Ratio table (avg_{B_r} g^q)^{1/q} / (avg_{B_2r} g^2)^{1/2} for
/// g = |D(V_s^eps(Du))| over a grid of exponents q in [1, 2.5].
struct IntegrabilityRow {
    double q = 0.0;
    double ratio = 0.0;
};
std::vector<IntegrabilityRow> higher_integrability_probe(const FieldBundle& f, double s,
                                                         const std::vector<double>& q_grid,
                                                         const Ball& ball);

}  // namespace plab
