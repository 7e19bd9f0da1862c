#pragma once

// Gaussian kernels shared by the bridge solver and the inference layers.
// All orthant quantities refer to the upper-right orthant of a standard
// bivariate normal: P(Z1 > h1, Z2 > h2) with correlation rho.

namespace disct {

double std_normal_pdf(double x);
double std_normal_cdf(double x);

// upper tail P(Z > x); more accurate than 1 - cdf(x) for large x
double std_normal_sf(double x);

// inverse CDF, p in (0,1); rational approximation plus one Halley step
double std_normal_quantile(double p);

// bivariate standard normal density at (h1, h2), |rho| <= 1 - 1e-9
double bivariate_density(double h1, double h2, double rho);

// P(Z1 > h1, Z2 > h2; rho), absolute accuracy ~1e-12
double orthant_upper(double h1, double h2, double rho);

// d/drho of orthant_upper; equals the bivariate density (Plackett)
double orthant_d_rho(double h1, double h2, double rho);

// d/dh_which of orthant_upper, which in {1,2}; always <= 0
double orthant_d_h(double h1, double h2, double rho, int which);

} // namespace disct
