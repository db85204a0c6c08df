#pragma once

#include "plab/linalg.hpp"

namespace plab {

/// The five scalar quantities every inequality in this module is built from.
struct QuadInvariants {
    double e2;      ///< |e|^2
    double normA2;  ///< |A|^2 (squared Hilbert-Schmidt norm)
    double Ae2;     ///< |Ae|^2
    double trA;     ///< tr(A)
    double eAe;     ///< <e, Ae>
};

QuadInvariants quad_invariants(const SymMatrix& A, const Vector& e);

/// Residual of the sharp lower bound for |e|^4 |A|^2:
///
///   |e|^4 |A|^2  >=  2|e|^2 |Ae|^2 + (|e|^2 tr(A) - <e,Ae>)^2 / (n-1) - <e,Ae>^2
///
/// Returns LHS minus RHS; nonnegative for every symmetric A, and identically
/// zero when n = 2. Returns exactly 0 for e = 0 (every term vanishes).
double matrix_inequality_residual(const QuadInvariants& q, int n);
double matrix_inequality_residual(const SymMatrix& A, const Vector& e);

/// Residual of the two-sided trace-coupled bound
///
///   | |Ae|^2 - tr(A)<e,Ae> - (|A|^2 - tr(A)^2)|e|^2 / 2 |
///       <=  (n-2)/2 * (|A|^2 |e|^2 - |Ae|^2),
///
/// computed as RHS - |LHS|. Implied by the sharp bound above; both sides
/// vanish when n = 2.
double baseline_inequality_residual(const QuadInvariants& q, int n);
double baseline_inequality_residual(const SymMatrix& A, const Vector& e);

/// Residual (RHS - |LHS|) of the diagonal form of the baseline bound,
///
///   | sum (l_i a_i)^2 - (sum l_i)(sum l_i a_i^2) - (|l|^2 - (sum l_i)^2)/2 |
///       <=  (n-2)/2 * (|l|^2 - sum (l_i a_i)^2),
///
/// valid for any l and any unit vector a. Rejects non-unit a.
double vector_inequality_residual(const Vector& lambda, const Vector& a);

/// Both inequalities rewritten as lower bounds for |e|^2 |A|^2, for direct
/// comparison. `sharp >= baseline` always, with equality when n = 2 or when
/// e is an eigenvector of A.
struct SharpnessGap {
    double sharp;     ///< lower bound from matrix_inequality_residual's estimate
    double baseline;  ///< lower bound from the trace-coupled estimate
    double gap() const { return sharp - baseline; }
};

SharpnessGap sharpness_gap(const QuadInvariants& q, int n);
SharpnessGap sharpness_gap(const SymMatrix& A, const Vector& e);  // rejects e = 0

/// Defects of the orthonormal-frame decomposition behind the sharp bound.
/// With an orthonormal frame whose last vector is e/|e| and B = O^T A O:
///   |B|^2 = |B_{n-1}|^2 + 2 sum_{i<n} B_{in}^2 + B_{nn}^2,
/// and |B|^2 = |A|^2, tr(B) = tr(A). All three defects should be ~0.
struct FrameCheck {
    double decomposition_defect;
    double frobenius_defect;
    double trace_defect;
    double max_defect() const;
};

FrameCheck frame_decomposition_check(const SymMatrix& A, const Vector& e);  // rejects e = 0

/// Orthonormal frame completion: deterministic Gram-Schmidt seeded with the
/// standard basis, skipping the basis vector most parallel to e; the
/// normalized e is placed last. Returns the frame as columns (row-major,
/// column k = frame vector k).
std::vector<double> orthonormal_frame_with_last(const Vector& e);

}  // namespace plab
