#include "plab/matrix_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plab {

namespace {

void require_matching(const SymMatrix& A, const Vector& e) {
    if (A.dim() != e.dim())
        throw std::invalid_argument("matrix_inequalities: dimension mismatch between A and e");
}

}  // namespace

QuadInvariants quad_invariants(const SymMatrix& A, const Vector& e) {
    require_matching(A, e);
    const Vector Ae = A.apply(e);
    return QuadInvariants{e.norm2(), A.frobenius2(), Ae.norm2(), A.trace(), e.dot(Ae)};
}

double matrix_inequality_residual(const QuadInvariants& q, int n) {
    if (n < 2) throw std::invalid_argument("matrix_inequality_residual: n must be >= 2");
    const double corr = q.e2 * q.trA - q.eAe;
    return q.e2 * q.e2 * q.normA2 - 2.0 * q.e2 * q.Ae2 - corr * corr / (n - 1) + q.eAe * q.eAe;
}

double matrix_inequality_residual(const SymMatrix& A, const Vector& e) {
    return matrix_inequality_residual(quad_invariants(A, e), A.dim());
}

double baseline_inequality_residual(const QuadInvariants& q, int n) {
    if (n < 2) throw std::invalid_argument("baseline_inequality_residual: n must be >= 2");
    const double lhs = q.Ae2 - q.trA * q.eAe - 0.5 * (q.normA2 - q.trA * q.trA) * q.e2;
    const double rhs = 0.5 * (n - 2) * (q.normA2 * q.e2 - q.Ae2);
    return rhs - std::abs(lhs);
}

double baseline_inequality_residual(const SymMatrix& A, const Vector& e) {
    return baseline_inequality_residual(quad_invariants(A, e), A.dim());
}

double vector_inequality_residual(const Vector& lambda, const Vector& a) {
    const int n = lambda.dim();
    if (a.dim() != n)
        throw std::invalid_argument("vector_inequality_residual: dimension mismatch");
    const double a2 = a.norm2();
    if (std::abs(a2 - 1.0) > 1e-12 * std::max(1.0, a2))
        throw std::invalid_argument("vector_inequality_residual: a must be a unit vector");

    double la2 = 0.0;   // sum (l_i a_i)^2
    double l1 = 0.0;    // sum l_i
    double la = 0.0;    // sum l_i a_i^2
    double l2 = 0.0;    // |l|^2
    for (int i = 0; i < n; ++i) {
        const double li = lambda[i];
        const double ai = a[i];
        la2 += li * ai * li * ai;
        l1 += li;
        la += li * ai * ai;
        l2 += li * li;
    }
    const double lhs = la2 - l1 * la - 0.5 * (l2 - l1 * l1);
    const double rhs = 0.5 * (n - 2) * (l2 - la2);
    return rhs - std::abs(lhs);
}

SharpnessGap sharpness_gap(const QuadInvariants& q, int n) {
    if (n < 2) throw std::invalid_argument("sharpness_gap: n must be >= 2");
    if (q.e2 == 0.0) throw std::invalid_argument("sharpness_gap: e must be nonzero");
    const double corr = q.e2 * q.trA - q.eAe;
    const double sharp =
        (2.0 * q.e2 * q.Ae2 + corr * corr / (n - 1) - q.eAe * q.eAe) / q.e2;
    const double baseline = (n * q.Ae2 + q.e2 * q.trA * q.trA - 2.0 * q.trA * q.eAe) / (n - 1);
    return SharpnessGap{sharp, baseline};
}

SharpnessGap sharpness_gap(const SymMatrix& A, const Vector& e) {
    return sharpness_gap(quad_invariants(A, e), A.dim());
}

std::vector<double> orthonormal_frame_with_last(const Vector& e) {
    const int n = e.dim();
    const double norm = e.norm();
    if (norm == 0.0) throw std::invalid_argument("orthonormal_frame_with_last: e must be nonzero");

    Vector en = (1.0 / norm) * e;

    // Skip the standard basis vector that e leans on most.
    int skip = 0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
        if (std::abs(en[i]) > best) {
            best = std::abs(en[i]);
            skip = i;
        }
    }

    std::vector<Vector> frame;
    frame.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (i == skip) continue;
        Vector v = Vector::basis(n, i);
        v -= v.dot(en) * en;
        for (const Vector& f : frame) v -= v.dot(f) * f;
        const double vn = v.norm();
        if (vn < 1e-14)
            throw std::runtime_error("orthonormal_frame_with_last: degenerate Gram-Schmidt step");
        v *= 1.0 / vn;
        frame.push_back(v);
    }
    frame.push_back(en);

    std::vector<double> cols(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(i) * n + k] = frame[static_cast<std::size_t>(k)][i];
    return cols;
}

FrameCheck frame_decomposition_check(const SymMatrix& A, const Vector& e) {
    require_matching(A, e);
    const int n = A.dim();
    const std::vector<double> O = orthonormal_frame_with_last(e);

    // B = O^T A O, built column by column.
    auto col = [&](int k) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = O[static_cast<std::size_t>(i) * n + k];
        return v;
    };
    std::vector<double> B(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        const Vector Acj = A.apply(col(j));
        for (int i = 0; i < n; ++i) B[static_cast<std::size_t>(i) * n + j] = col(i).dot(Acj);
    }
    auto b = [&](int i, int j) { return B[static_cast<std::size_t>(i) * n + j]; };

    double normB2 = 0.0;
    double trB = 0.0;
    for (int i = 0; i < n; ++i) {
        trB += b(i, i);
        for (int j = 0; j < n; ++j) normB2 += b(i, j) * b(i, j);
    }

    double sub2 = 0.0;  // |B_{n-1}|^2
    for (int i = 0; i + 1 < n; ++i)
        for (int j = 0; j + 1 < n; ++j) sub2 += b(i, j) * b(i, j);
    double cross = 0.0;  // sum_{i<n} B_{in}^2, averaged over the two mirror copies
    for (int i = 0; i + 1 < n; ++i) cross += 0.5 * (b(i, n - 1) * b(i, n - 1) + b(n - 1, i) * b(n - 1, i));

    FrameCheck c;
    c.decomposition_defect = std::abs(normB2 - (sub2 + 2.0 * cross + b(n - 1, n - 1) * b(n - 1, n - 1)));
    c.frobenius_defect = std::abs(normB2 - A.frobenius2());
    c.trace_defect = std::abs(trB - A.trace());
    return c;
}

double FrameCheck::max_defect() const {
    return std::max({decomposition_defect, frobenius_defect, trace_defect});
}

}  // namespace plab
