#include "plab/linalg.hpp"

#include <cmath>

namespace plab {

double Vector::dot(const Vector& o) const {
    if (o.dim() != dim()) throw std::invalid_argument("Vector::dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += v_[i] * o.v_[i];
    return s;
}

double Vector::norm() const { return std::sqrt(norm2()); }

Vector& Vector::operator*=(double t) {
    for (double& x : v_) x *= t;
    return *this;
}

Vector& Vector::operator+=(const Vector& o) {
    if (o.dim() != dim()) throw std::invalid_argument("Vector::operator+=: dimension mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& o) {
    if (o.dim() != dim()) throw std::invalid_argument("Vector::operator-=: dimension mismatch");
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diag(std::initializer_list<double> d) {
    SymMatrix m(static_cast<int>(d.size()));
    int i = 0;
    for (double v : d) {
        m.set(i, i, v);
        ++i;
    }
    return m;
}

SymMatrix SymMatrix::diag(const Vector& d) {
    SymMatrix m(d.dim());
    for (int i = 0; i < d.dim(); ++i) m.set(i, i, d[i]);
    return m;
}

SymMatrix SymMatrix::symmetrized(int dim, const std::vector<double>& row_major) {
    if (row_major.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("SymMatrix::symmetrized: wrong entry count");
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            const double v = 0.5 * (row_major[static_cast<std::size_t>(i) * dim + j] +
                                    row_major[static_cast<std::size_t>(j) * dim + i]);
            m.set(i, j, v);
        }
    return m;
}

Vector SymMatrix::apply(const Vector& e) const {
    if (e.dim() != n_) throw std::invalid_argument("SymMatrix::apply: dimension mismatch");
    Vector r(n_);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += a_[idx(i, j)] * e[j];
        r[i] = s;
    }
    return r;
}

double SymMatrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += a_[idx(i, i)];
    return s;
}

double SymMatrix::frobenius2() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return s;
}

SymMatrix& SymMatrix::operator*=(double t) {
    for (double& x : a_) x *= t;
    return *this;
}

}  // namespace plab
