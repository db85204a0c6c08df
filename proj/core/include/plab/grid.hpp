#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace plab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }

    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    Vec2& operator*=(double t) {
        x *= t;
        y *= t;
        return *this;
    }
    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend Vec2 operator*(double t, Vec2 v) { return v *= t; }
};

/// Symmetric 2x2 matrix (xy stored once).
struct SymMat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    Vec2 apply(const Vec2& v) const { return Vec2{xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    double trace() const { return xx + yy; }
    double frobenius2() const { return xx * xx + 2.0 * xy * xy + yy * yy; }
};

/// General 2x2 matrix (e.g. Jacobians, which need not be symmetric).
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;

    double frobenius2() const { return xx * xx + xy * xy + yx * yx + yy * yy; }
};

enum class NodeKind : std::uint8_t { exterior = 0, boundary = 1, interior = 2 };

/// Uniform 2-D rectangular grid with a domain mask. nx and ny count cells,
/// so there are (nx+1) x (ny+1) nodes; node (i, j) sits at
/// origin + h * (i, j). Fields carry values on interior and boundary nodes.
///
/// Mask construction: a node is in-domain if the shape predicate holds at
/// it; interior if additionally its 4 axis neighbors are in-domain; boundary
/// otherwise. That makes every interior node's 4-stencil available and is
/// validated together with connectedness of the interior.
class Grid {
  public:
    static std::shared_ptr<const Grid> square(int nx, int ny, double h, Vec2 origin = {});
    static std::shared_ptr<const Grid> annulus(int nx, int ny, double h, Vec2 origin, Vec2 center,
                                               double r_in, double r_out);
    static std::shared_ptr<const Grid> from_predicate(int nx, int ny, double h, Vec2 origin,
                                                      const std::function<bool(Vec2)>& in_domain);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    Vec2 origin() const { return origin_; }
    int nodes_x() const { return nx_ + 1; }
    int nodes_y() const { return ny_ + 1; }
    std::size_t num_nodes() const { return static_cast<std::size_t>(nodes_x()) * nodes_y(); }

    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * nodes_x() + i;
    }
    Vec2 pos(int i, int j) const { return Vec2{origin_.x + h_ * i, origin_.y + h_ * j}; }

    bool valid_ij(int i, int j) const { return i >= 0 && i <= nx_ && j >= 0 && j <= ny_; }
    NodeKind kind(int i, int j) const {
        return valid_ij(i, j) ? mask_[index(i, j)] : NodeKind::exterior;
    }
    bool has_value(int i, int j) const { return kind(i, j) != NodeKind::exterior; }
    bool is_interior(int i, int j) const { return kind(i, j) == NodeKind::interior; }
    bool is_boundary(int i, int j) const { return kind(i, j) == NodeKind::boundary; }

    std::size_t interior_count() const { return interior_count_; }
    std::size_t boundary_count() const { return boundary_count_; }

    /// Shape metadata for snapshots and manifests ("square", "annulus", "custom").
    const std::string& shape_tag() const { return shape_tag_; }

    template <typename F>
    void for_each_interior(F&& f) const {
        for (int j = 0; j <= ny_; ++j)
            for (int i = 0; i <= nx_; ++i)
                if (mask_[index(i, j)] == NodeKind::interior) f(i, j);
    }
    template <typename F>
    void for_each_in_domain(F&& f) const {
        for (int j = 0; j <= ny_; ++j)
            for (int i = 0; i <= nx_; ++i)
                if (mask_[index(i, j)] != NodeKind::exterior) f(i, j);
    }

    Grid(int nx, int ny, double h, Vec2 origin, std::vector<NodeKind> mask, std::string shape_tag);

  private:
    void validate() const;

    int nx_;
    int ny_;
    double h_;
    Vec2 origin_;
    std::vector<NodeKind> mask_;
    std::string shape_tag_;
    std::size_t interior_count_ = 0;
    std::size_t boundary_count_ = 0;
};

/// Per-node storage over a grid. Entries exist for all nodes; only values at
/// interior and boundary nodes are meaningful.
template <typename T>
class NodeField {
  public:
    NodeField() = default;
    explicit NodeField(std::shared_ptr<const Grid> grid, T init = T{})
        : grid_(std::move(grid)), values_(grid_->num_nodes(), init) {}

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
    bool empty() const { return values_.empty(); }

    T& at(int i, int j) { return values_[grid_->index(i, j)]; }
    const T& at(int i, int j) const { return values_[grid_->index(i, j)]; }

    std::vector<T>& raw() { return values_; }
    const std::vector<T>& raw() const { return values_; }

  private:
    std::shared_ptr<const Grid> grid_;
    std::vector<T> values_;
};

using ScalarField = NodeField<double>;
using VectorField = NodeField<Vec2>;
using SymMatrixField = NodeField<SymMat2>;
using MatrixField = NodeField<Mat2>;

/// Throws if any in-domain entry is NaN or infinite.
void assert_finite(const ScalarField& f, const char* what);
void assert_finite(const VectorField& f, const char* what);
void assert_finite(const SymMatrixField& f, const char* what);

}  // namespace plab
