#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "bridge.hpp"

namespace disct {

// Per-sample estimating-equation residuals, row l = sample, column c =
// equation. Component order matches the parameter order used by
// psi_jacobian: (sigma, side-1 cut, side-2 cut). A discretized side's
// row is its exceedance residual; a continuous side's row is its mean
// residual. Continuous pairs need a single component.
struct PsiMatrix {
    std::size_t n = 0;
    int k = 0;
    std::vector<double> v;  // row-major n x k

    double at(std::size_t l, int c) const { return v[l * static_cast<std::size_t>(k) + c]; }
    double& at(std::size_t l, int c) { return v[l * static_cast<std::size_t>(k) + c]; }
};

// Residual samples at a given state. The state does not have to be the
// fitted one; evaluating at externally supplied parameters is allowed
// (used to check the estimator against ground truth in simulations).
PsiMatrix psi_samples(const std::vector<double>& a, const std::vector<double>& b,
                      const PairTheta& theta, PairKind kind);

// Analytic derivative of the mean residual with respect to the state,
// in the same component order as psi_samples.
Eigen::MatrixXd psi_jacobian(const PairTheta& theta, PairKind kind);

// Per-sample influence on sigma: first component of -J^{-1} psi_l.
// Averages to ~0 at the fitted state.
std::vector<double> influence_samples(const PsiMatrix& psi, const Eigen::MatrixXd& jac);

// Plug-in variance of sigma_hat: (1/n) (J^{-1} M J^{-T})_{11} with
// M = E_n[psi psi^T]; identical to (1/n^2) sum_l xi_l^2.
double sandwich_variance(const PsiMatrix& psi, const Eigen::MatrixXd& jac);

struct PairInference {
    PairTheta theta;
    PairKind kind = PairKind::BothContinuous;
    std::vector<double> xi;
    double variance = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    bool dependent = false;
};

// Two-sided test of sigma = 0 for one column pair.
PairInference independence_test(const std::vector<double>& a, const std::vector<double>& b,
                                PairKind kind, double alpha);

// z and two-sided p for an estimate with the given variance; shared by the
// pair test and the conditional test.
void wald_pvalue(double estimate, double variance, double& z, double& p);

} // namespace disct
