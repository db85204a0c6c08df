#include "plab/grid.hpp"

#include <cmath>
#include <deque>
#include <utility>

namespace plab {

Grid::Grid(int nx, int ny, double h, Vec2 origin, std::vector<NodeKind> mask, std::string shape_tag)
    : nx_(nx), ny_(ny), h_(h), origin_(origin), mask_(std::move(mask)), shape_tag_(std::move(shape_tag)) {
    if (nx_ < 2 || ny_ < 2) throw std::invalid_argument("Grid: need at least 2x2 cells");
    if (h_ <= 0.0) throw std::invalid_argument("Grid: spacing h must be positive");
    if (mask_.size() != num_nodes()) throw std::invalid_argument("Grid: mask size mismatch");
    for (NodeKind k : mask_) {
        if (k == NodeKind::interior) ++interior_count_;
        if (k == NodeKind::boundary) ++boundary_count_;
    }
    validate();
}

void Grid::validate() const {
    if (interior_count_ == 0) throw std::invalid_argument("Grid: no interior nodes");

    // Every interior node's 4 neighbors must carry values.
    for (int j = 0; j <= ny_; ++j)
        for (int i = 0; i <= nx_; ++i) {
            if (mask_[index(i, j)] != NodeKind::interior) continue;
            if (!has_value(i - 1, j) || !has_value(i + 1, j) || !has_value(i, j - 1) ||
                !has_value(i, j + 1))
                throw std::invalid_argument("Grid: interior node with exterior neighbor");
        }

    // Interior must be 4-connected.
    std::vector<char> seen(num_nodes(), 0);
    std::deque<std::pair<int, int>> queue;
    for (int j = 0; j <= ny_ && queue.empty(); ++j)
        for (int i = 0; i <= nx_ && queue.empty(); ++i)
            if (mask_[index(i, j)] == NodeKind::interior) {
                queue.emplace_back(i, j);
                seen[index(i, j)] = 1;
            }
    std::size_t reached = 0;
    while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        ++reached;
        const int di[4] = {1, -1, 0, 0};
        const int dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ii = i + di[k];
            const int jj = j + dj[k];
            if (valid_ij(ii, jj) && !seen[index(ii, jj)] &&
                mask_[index(ii, jj)] == NodeKind::interior) {
                seen[index(ii, jj)] = 1;
                queue.emplace_back(ii, jj);
            }
        }
    }
    if (reached != interior_count_) throw std::invalid_argument("Grid: interior is not connected");
}

std::shared_ptr<const Grid> Grid::square(int nx, int ny, double h, Vec2 origin) {
    std::vector<NodeKind> mask(static_cast<std::size_t>(nx + 1) * (ny + 1), NodeKind::boundary);
    for (int j = 1; j < ny; ++j)
        for (int i = 1; i < nx; ++i)
            mask[static_cast<std::size_t>(j) * (nx + 1) + i] = NodeKind::interior;
    return std::make_shared<Grid>(nx, ny, h, origin, std::move(mask), "square");
}

std::shared_ptr<const Grid> Grid::from_predicate(int nx, int ny, double h, Vec2 origin,
                                                 const std::function<bool(Vec2)>& in_domain) {
    const std::size_t count = static_cast<std::size_t>(nx + 1) * (ny + 1);
    std::vector<char> in(count, 0);
    auto at = [&](int i, int j) { return static_cast<std::size_t>(j) * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            in[at(i, j)] = in_domain(Vec2{origin.x + h * i, origin.y + h * j}) ? 1 : 0;

    auto is_in = [&](int i, int j) {
        return i >= 0 && i <= nx && j >= 0 && j <= ny && in[at(i, j)] != 0;
    };
    std::vector<NodeKind> mask(count, NodeKind::exterior);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            if (!in[at(i, j)]) continue;
            const bool inner = is_in(i - 1, j) && is_in(i + 1, j) && is_in(i, j - 1) && is_in(i, j + 1);
            mask[at(i, j)] = inner ? NodeKind::interior : NodeKind::boundary;
        }
    return std::make_shared<Grid>(nx, ny, h, origin, std::move(mask), "custom");
}

std::shared_ptr<const Grid> Grid::annulus(int nx, int ny, double h, Vec2 origin, Vec2 center,
                                          double r_in, double r_out) {
    if (!(0.0 <= r_in && r_in < r_out))
        throw std::invalid_argument("Grid::annulus: need 0 <= r_in < r_out");
    auto grid = from_predicate(nx, ny, h, origin, [=](Vec2 x) {
        const double r = (x - center).norm();
        return r > r_in && r < r_out;
    });
    // Rebuild with the proper tag; from_predicate already validated the mask.
    std::vector<NodeKind> mask(grid->num_nodes());
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) mask[grid->index(i, j)] = grid->kind(i, j);
    return std::make_shared<Grid>(nx, ny, h, origin, std::move(mask), "annulus");
}

namespace {

template <typename T, typename Probe>
void assert_finite_impl(const NodeField<T>& f, const char* what, Probe&& probe) {
    if (f.empty()) throw std::invalid_argument(std::string(what) + ": empty field");
    f.grid().for_each_in_domain([&](int i, int j) {
        if (!probe(f.at(i, j)))
            throw std::runtime_error(std::string(what) + ": non-finite value at node (" +
                                     std::to_string(i) + ", " + std::to_string(j) + ")");
    });
}

}  // namespace

void assert_finite(const ScalarField& f, const char* what) {
    assert_finite_impl(f, what, [](double v) { return std::isfinite(v); });
}

void assert_finite(const VectorField& f, const char* what) {
    assert_finite_impl(f, what, [](const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); });
}

void assert_finite(const SymMatrixField& f, const char* what) {
    assert_finite_impl(f, what, [](const SymMat2& m) {
        return std::isfinite(m.xx) && std::isfinite(m.xy) && std::isfinite(m.yy);
    });
}

}  // namespace plab
