#include "bridge.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "normal.hpp"

namespace disct {

namespace {

constexpr double kSigmaBound = 1.0 - 1e-6;

double column_mean(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

void check_pair_sizes(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) fail(ErrorCode::Shape, "pair columns differ in length");
    if (a.size() < 2) fail(ErrorCode::Shape, "pair needs at least two rows");
}

// Brent's method on a monotone bracketed function; runs until the
// bracket collapses so the solve stays sharp where the mass is flat.
template <class F>
double brent_root(const F& f, double a, double b, double fa, double fb) {
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 1e-15;
        const double xm = 0.5 * (c - b);
        if (fb == 0.0 || std::abs(xm) <= tol1) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return b;
}

} // namespace

PairKind pair_kind(ColumnKind a, ColumnKind b) {
    if (a == ColumnKind::Continuous)
        return b == ColumnKind::Continuous ? PairKind::BothContinuous
                                           : PairKind::MixedContinuousFirst;
    return b == ColumnKind::Continuous ? PairKind::MixedDiscreteFirst : PairKind::BothDiscrete;
}

double estimate_tau_single(const std::vector<double>& col) {
    if (col.empty()) fail(ErrorCode::Shape, "estimate_tau_single: empty column");
    const double m = column_mean(col);
    std::size_t c = 0;
    for (double x : col)
        if (x > m) ++c;
    return static_cast<double>(c) / static_cast<double>(col.size());
}

double estimate_tau_pair(const std::vector<double>& a, const std::vector<double>& b,
                         PairKind kind) {
    check_pair_sizes(a, b);
    const bool disc1 = kind == PairKind::BothDiscrete || kind == PairKind::MixedDiscreteFirst;
    const bool disc2 = kind == PairKind::BothDiscrete || kind == PairKind::MixedContinuousFirst;
    const double t1 = disc1 ? column_mean(a) : 0.0;
    const double t2 = disc2 ? column_mean(b) : 0.0;
    std::size_t c = 0;
    for (std::size_t l = 0; l < a.size(); ++l)
        if (a[l] > t1 && b[l] > t2) ++c;
    return static_cast<double>(c) / static_cast<double>(a.size());
}

double estimate_h(double tau, std::size_t n) {
    if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorCode::InvalidArgument, "tau outside [0,1]");
    if (n == 0) fail(ErrorCode::InvalidArgument, "estimate_h: n must be positive");
    const double lo = 0.5 / static_cast<double>(n);
    const double t = std::clamp(tau, lo, 1.0 - lo);
    return std_normal_quantile(1.0 - t);
}

double solve_bridge(double tau12, double h1, double h2) {
    if (!(tau12 >= 0.0 && tau12 <= 1.0)) fail(ErrorCode::InvalidArgument, "tau12 outside [0,1]");
    const auto f = [&](double s) { return orthant_upper(h1, h2, s) - tau12; };
    const double lo = -kSigmaBound, hi = kSigmaBound;
    const double flo = f(lo);
    if (flo >= 0.0) return lo;
    const double fhi = f(hi);
    if (fhi <= 0.0) return hi;
    return brent_root(f, lo, hi, flo, fhi);
}

PairTheta estimate_pair(const std::vector<double>& a, const std::vector<double>& b,
                        PairKind kind) {
    check_pair_sizes(a, b);
    const std::size_t n = a.size();
    PairTheta th;
    if (kind == PairKind::BothContinuous) {
        const double ma = column_mean(a), mb = column_mean(b);
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += (a[l] - ma) * (b[l] - mb);
        th.sigma = std::clamp(s / static_cast<double>(n), -kSigmaBound, kSigmaBound);
        return th;
    }
    const bool disc1 = kind != PairKind::MixedContinuousFirst;
    const bool disc2 = kind != PairKind::MixedDiscreteFirst;
    if (disc1) {
        th.thr1 = column_mean(a);
        th.h1 = estimate_h(estimate_tau_single(a), n);
    }
    if (disc2) {
        th.thr2 = column_mean(b);
        th.h2 = estimate_h(estimate_tau_single(b), n);
    }
    // A joint exceedance at or beyond the attainable range solves to the
    // clamped correlation; downstream the orthant density there is tiny, so
    // the influence (and the test variance) saturates rather than erroring.
    th.sigma = solve_bridge(estimate_tau_pair(a, b, kind), th.h1, th.h2);
    return th;
}

} // namespace disct
