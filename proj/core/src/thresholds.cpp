#include "plab/thresholds.hpp"

#include <algorithm>
#include <stdexcept>

namespace plab {

namespace {

void require_np(int n, double p) {
    if (n < 2) throw std::invalid_argument("thresholds: n must be >= 2");
    if (p <= 1.0) throw std::invalid_argument("thresholds: p must be > 1");
}

}  // namespace

CoefficientTriple coefficient_triple(int n, double p, double s, double eta) {
    require_np(n, p);
    if (eta < 0.0) throw std::invalid_argument("coefficient_triple: eta must be >= 0");
    const double ratio = (p - 1.0) / (n - 1.0);
    CoefficientTriple t;
    t.a = (p - 1.0) * (s + 1.0 + ratio) - 3.0 * eta;
    t.b = p + s + 2.0 * ratio - 2.0 * eta;
    t.c = 1.0 + 1.0 / (n - 1.0);
    t.n = n;
    t.p = p;
    t.s = s;
    t.eta = eta;
    return t;
}

double s_threshold(int n, double p) {
    require_np(n, p);
    return -1.0 - (p - 1.0) / (n - 1.0);
}

double baseline_s_threshold(int n, double p) {
    require_np(n, p);
    const double nn = static_cast<double>(n);
    return 2.0 - std::min(p + nn / (nn - 1.0), 3.0 + (p - 1.0) / (nn - 1.0));
}

}  // namespace plab
