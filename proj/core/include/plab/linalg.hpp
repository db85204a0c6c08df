#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace plab {

/// Dense real vector of small dimension (n is typically 2..8).
class Vector {
  public:
    Vector() = default;
    explicit Vector(int dim) : v_(check_dim(dim), 0.0) {}
    Vector(std::initializer_list<double> vals) : v_(vals) {}

    static Vector zero(int dim) { return Vector(dim); }
    static Vector basis(int dim, int k) {
        Vector e(dim);
        e[k] = 1.0;
        return e;
    }

    int dim() const { return static_cast<int>(v_.size()); }
    double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }

    double dot(const Vector& o) const;
    double norm2() const { return dot(*this); }
    double norm() const;

    Vector& operator*=(double t);
    Vector& operator+=(const Vector& o);
    Vector& operator-=(const Vector& o);
    friend Vector operator*(double t, Vector v) { return v *= t; }
    friend Vector operator+(Vector a, const Vector& b) { return a += b; }
    friend Vector operator-(Vector a, const Vector& b) { return a -= b; }

  private:
    static std::size_t check_dim(int dim) {
        if (dim < 1) throw std::invalid_argument("Vector: dim must be >= 1");
        return static_cast<std::size_t>(dim);
    }
    std::vector<double> v_;
};

/// Dense symmetric n x n matrix, n >= 2. Full row-major storage; set()
/// writes both mirror entries so symmetry is bit-exact by construction.
class SymMatrix {
  public:
    explicit SymMatrix(int dim) : n_(check_dim(dim)), a_(static_cast<std::size_t>(n_) * n_, 0.0) {}

    static SymMatrix identity(int dim);
    static SymMatrix diag(std::initializer_list<double> d);
    static SymMatrix diag(const Vector& d);
    /// (M + M^T)/2 of an arbitrary row-major dim x dim matrix.
    static SymMatrix symmetrized(int dim, const std::vector<double>& row_major);

    int dim() const { return n_; }
    double operator()(int i, int j) const { return a_[idx(i, j)]; }
    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }

    Vector apply(const Vector& e) const;
    double trace() const;
    /// Squared Hilbert-Schmidt (Frobenius) norm.
    double frobenius2() const;

    SymMatrix& operator*=(double t);
    friend SymMatrix operator*(double t, SymMatrix m) { return m *= t; }

  private:
    static int check_dim(int dim) {
        if (dim < 2) throw std::invalid_argument("SymMatrix: dim must be >= 2");
        return dim;
    }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    int n_ = 0;
    std::vector<double> a_;
};

}  // namespace plab
