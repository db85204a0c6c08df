#pragma once

namespace plab {

/// Coefficients of the quadratic form in |Du|^2/mu^2 and eps/mu^2 that
/// controls the contracted energy estimate:
///
///   a = (p-1)(s + 1 + (p-1)/(n-1)) - 3*eta
///   b = p + s + 2(p-1)/(n-1) - 2*eta
///   c = 1 + 1/(n-1)
///
/// a(eta=0) > 0 is equivalent to s > s_threshold(n, p).
struct CoefficientTriple {
    double a;
    double b;
    double c;
    int n;
    double p;
    double s;
    double eta;
};

CoefficientTriple coefficient_triple(int n, double p, double s, double eta);

/// Admissible range for the V_s exponent parameter: s > -1 - (p-1)/(n-1).
double s_threshold(int n, double p);

/// The older restriction s > 2 - min{p + n/(n-1), 3 + (p-1)/(n-1)} that this
/// library's threshold improves on. s_threshold <= baseline_s_threshold
/// everywhere, strictly for 1 < p < 2 and n >= 3.
double baseline_s_threshold(int n, double p);

}  // namespace plab
