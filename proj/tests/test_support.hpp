#pragma once

#include "plab/estimates.hpp"
#include "plab/exact_solutions.hpp"
#include "plab/grid.hpp"
#include "plab/linalg.hpp"
#include "plab/rng.hpp"

#include <cmath>
#include <vector>

namespace plab_test {

/// Observed convergence order from errors at h and h/2.
inline double observed_order(double err_coarse, double err_fine) {
    return std::log2(err_coarse / err_fine);
}

/// Random rotation via Gram-Schmidt on a Gaussian matrix.
inline std::vector<double> random_orthogonal(int n, plab::CounterRng& rng) {
    std::vector<plab::Vector> cols;
    cols.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        plab::Vector v = rng.gaussian_vector(n);
        for (const auto& c : cols) v -= v.dot(c) * c;
        v *= 1.0 / v.norm();
        cols.push_back(v);
    }
    std::vector<double> O(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) O[static_cast<std::size_t>(i) * n + k] = cols[static_cast<std::size_t>(k)][i];
    return O;
}

/// O^T A O for a row-major orthogonal O.
inline plab::SymMatrix rotate(const plab::SymMatrix& A, const std::vector<double>& O) {
    const int n = A.dim();
    auto o = [&](int i, int j) { return O[static_cast<std::size_t>(i) * n + j]; };
    std::vector<double> AO(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += A(i, k) * o(k, j);
            AO[static_cast<std::size_t>(i) * n + j] = s;
        }
    std::vector<double> B(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += o(k, i) * AO[static_cast<std::size_t>(k) * n + j];
            B[static_cast<std::size_t>(i) * n + j] = s;
        }
    return plab::SymMatrix::symmetrized(n, B);
}

/// O^T e.
inline plab::Vector rotate(const plab::Vector& e, const std::vector<double>& O) {
    const int n = e.dim();
    plab::Vector r(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += O[static_cast<std::size_t>(i) * n + j] * e[i];
        r[j] = s;
    }
    return r;
}

/// Annulus grid centered at the origin: nodes span [-extent, extent]^2.
inline std::shared_ptr<const plab::Grid> make_annulus(int cells, double extent, double r_in,
                                                      double r_out) {
    const double h = 2.0 * extent / cells;
    return plab::Grid::annulus(cells, cells, h, plab::Vec2{-extent, -extent}, plab::Vec2{},
                               r_in, r_out);
}

}  // namespace plab_test
