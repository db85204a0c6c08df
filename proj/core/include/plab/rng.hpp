#pragma once

#include "plab/linalg.hpp"

#include <cmath>
#include <cstdint>

namespace plab {

/// SplitMix64 finalizer. Used as a counter-based generator: the k-th output
/// of a stream is mix64(seed + k * GOLDEN), so any draw is a pure function
/// of (seed, stream, counter) and identical runs reproduce byte-identical
/// sample sequences regardless of task scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix64(seed ^ mix64(stream * 0xda942042e4dd58b5ULL + 1))), counter_(0) {}

    std::uint64_t next_u64() { return mix64(base_ + counter_++ * 0x9e3779b97f4a7c15ULL); }

    /// Uniform in [0, 1) with 53 significant bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; the spare value is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Vector gaussian_vector(int dim) {
        Vector v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

    /// i.i.d. standard Gaussian entries, symmetrized as (M + M^T)/2.
    SymMatrix gaussian_symmetric(int dim) {
        std::vector<double> m(static_cast<std::size_t>(dim) * dim);
        for (double& x : m) x = gaussian();
        return SymMatrix::symmetrized(dim, m);
    }

  private:
    std::uint64_t base_;
    std::uint64_t counter_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace plab
