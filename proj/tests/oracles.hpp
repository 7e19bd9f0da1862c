#pragma once

// Slow reference implementations used only by the tests. Deliberately
// different algorithms from src/: the CDF oracle uses a Taylor series and
// a Mills-ratio continued fraction, the orthant oracle integrates the raw
// bivariate density over both axes.

#include <cmath>
#include <functional>

namespace oracle {

inline double phi(double x) { return std::exp(-0.5 * x * x) / 2.5066282746310005024; }

// Phi(x) = 1/2 + phi(x) * sum_{n>=0} x^{2n+1} / (1*3*...*(2n+1)), |x| small
inline double cdf_series(double x) {
    double term = x, sum = x;
    for (int n = 1; n < 500; ++n) {
        term *= x * x / (2.0 * n + 1.0);
        sum += term;
        if (std::abs(term) < 1e-20 * std::abs(sum)) break;
    }
    return 0.5 + phi(x) * sum;
}

// upper tail via the Mills-ratio continued fraction, x > 0
inline double tail_cf(double x) {
    double r = 0.0;
    for (int k = 200; k >= 1; --k) r = k / (x + r);
    return phi(x) / (x + r);
}

inline double normal_cdf(double x) {
    if (x > 7.0) return 1.0 - tail_cf(x);
    if (x < -7.0) return tail_cf(-x);
    return cdf_series(x);
}

inline double normal_sf(double x) { return normal_cdf(-x); }

inline double bvn_density(double x, double y, double rho) {
    const double omr2 = 1.0 - rho * rho;
    const double q = (x * x - 2.0 * rho * x * y + y * y) / omr2;
    return std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(omr2));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double eps,
                      int depth) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double m, double b, double fa, double fm, double fb, double whole,
                   double eps, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
            return run(a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
                   run(m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
        }
    };
    if (!(a < b)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return Rec{f}.run(a, m, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), eps, depth);
}

// P(Z1 > h1, Z2 > h2) by direct 2-D quadrature of the density
inline double orthant(double h1, double h2, double rho) {
    const double top = 9.0;
    const auto outer = [&](double x) {
        const auto inner = [&](double y) { return bvn_density(x, y, rho); };
        return simpson(inner, std::max(h2, -top), top, 1e-13, 40);
    };
    return simpson(outer, std::max(h1, -top), top, 5e-12, 40);
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace oracle
