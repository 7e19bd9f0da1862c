#pragma once

#include <cstddef>
#include <vector>

#include "data.hpp"

namespace disct {

enum class PairKind {
    BothContinuous,
    MixedContinuousFirst,  // first column continuous, second discretized
    MixedDiscreteFirst,
    BothDiscrete,
};

PairKind pair_kind(ColumnKind a, ColumnKind b);

// Latent pairwise state recovered from one column pair. thr* are the
// binarization thresholds actually used (column mean for discretized
// columns, 0 for continuous ones); h* are the matching latent cuts.
struct PairTheta {
    double sigma = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double thr1 = 0.0;
    double thr2 = 0.0;
};

// Exceedance rate P_n(x > mean(x)) of one column.
double estimate_tau_single(const std::vector<double>& col);

// Joint exceedance rate of a pair; continuous sides compare against 0,
// discretized sides against their own column mean.
double estimate_tau_pair(const std::vector<double>& a, const std::vector<double>& b,
                         PairKind kind);

// Latent cut matching an exceedance rate; tau is clamped into
// [1/(2n), 1 - 1/(2n)] so empty cells stay finite.
double estimate_h(double tau, std::size_t n);

// Inverts tau12 = P(Z1 > h1, Z2 > h2; sigma) for sigma. The orthant mass
// is strictly increasing in sigma, so the root is bracketed on
// [-1 + 1e-6, 1 - 1e-6]; rates outside the attainable range clamp to the
// nearer endpoint. Residual at the solution is below 1e-10 when attainable.
double solve_bridge(double tau12, double h1, double h2);

// Full pairwise recovery for two columns of the stated kind.
PairTheta estimate_pair(const std::vector<double>& a, const std::vector<double>& b,
                        PairKind kind);

} // namespace disct
