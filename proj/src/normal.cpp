#include "normal.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "error.hpp"
#include "rng.hpp"

namespace disct {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kMaxAbsRho = 1.0 - 1e-9;

void check_finite(double x, const char* name) {
    if (!std::isfinite(x)) fail(ErrorCode::InvalidArgument, std::string(name) + " must be finite");
}

// Acklam's rational approximation to the normal quantile (~1e-9 relative),
// used as the seed for one Halley step below.
double quantile_seed(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;

    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Adaptive Simpson with Richardson correction. eps is an absolute target.
double simpson_step(const auto& f, double a, double m, double b, double fa, double fm, double fb,
                    double whole, double eps, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
        return left + right + delta / 15.0;
    return simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate(const auto& f, double a, double b, double eps) {
    if (!(a < b)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, m, b, fa, fm, fb, whole, eps, 48);
}

void check_rho(double rho) {
    if (!std::isfinite(rho) || std::abs(rho) > kMaxAbsRho)
        fail(ErrorCode::InvalidArgument, "rho outside [-1+1e-9, 1-1e-9]");
}

} // namespace

double std_normal_pdf(double x) {
    check_finite(x, "x");
    return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

double std_normal_cdf(double x) {
    check_finite(x, "x");
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_sf(double x) {
    check_finite(x, "x");
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        fail(ErrorCode::InvalidArgument, "quantile needs p in (0,1)");
    double x = quantile_seed(p);
    if (std::abs(x) < 37.0) {
        // Halley refinement against the erfc-based CDF
        const double e = std_normal_cdf(x) - p;
        const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double bivariate_density(double h1, double h2, double rho) {
    check_finite(h1, "h1");
    check_finite(h2, "h2");
    check_rho(rho);
    if (h1 < h2) std::swap(h1, h2);  // symmetric in (h1, h2); fix the operand order
    const double omr2 = (1.0 - rho) * (1.0 + rho);
    const double q = (h1 * h1 - 2.0 * rho * h1 * h2 + h2 * h2) / omr2;
    return std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(omr2));
}

double orthant_upper(double h1, double h2, double rho) {
    check_finite(h1, "h1");
    check_finite(h2, "h2");
    check_rho(rho);
    if (rho == 0.0) return std_normal_sf(h1) * std_normal_sf(h2);
    // The function is symmetric in (h1, h2) but the quadrature below is not:
    // condition on the more extreme variable so both operand orders return
    // the same value and the integrand stays on the short tail.
    if (h1 < h2) std::swap(h1, h2);

    // Condition on Z1 = t: P = int_{h1}^inf phi(t) * SF((h2 - rho t)/s) dt.
    // phi is below 1e-17 outside [-8.75, 8.75], so the range can be cut there.
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    const double lo = std::max(h1, -8.75);
    const double hi = 8.75;
    if (lo >= hi) return 0.0;
    const auto f = [&](double t) { return std_normal_pdf(t) * std_normal_sf((h2 - rho * t) / s); };
    const double v = integrate(f, lo, hi, 5e-14);
    return std::min(1.0, std::max(0.0, v));
}

double orthant_d_rho(double h1, double h2, double rho) {
    return bivariate_density(h1, h2, rho);
}

double orthant_d_h(double h1, double h2, double rho, int which) {
    check_finite(h1, "h1");
    check_finite(h2, "h2");
    check_rho(rho);
    if (which != 1 && which != 2) fail(ErrorCode::InvalidArgument, "which must be 1 or 2");
    const double a = (which == 1) ? h1 : h2;
    const double b = (which == 1) ? h2 : h1;
    const double s = std::sqrt((1.0 - rho) * (1.0 + rho));
    return -std_normal_pdf(a) * std_normal_sf((b - rho * a) / s);
}

double RngStream::normal() { return std_normal_quantile(uniform_open()); }

double RngStream::student_t3() {
    // Z / sqrt(chi2_3 / 3), then / sqrt(3) so the variance is 1
    const double z = normal();
    double c = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double w = normal();
        c += w * w;
    }
    return z / std::sqrt(c / 3.0) / std::sqrt(3.0);
}

double RngStream::exponential1() { return -std::log1p(-uniform()) - 1.0; }

} // namespace disct
