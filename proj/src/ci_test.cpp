#include "ci_test.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "normal.hpp"

namespace disct {

namespace {

constexpr double kEigFloor = 1e-6;
constexpr double kSingularTol = 1e-8;

std::shared_ptr<const PairEstimate> estimate_one(const DataMatrix& data, std::size_t a,
                                                 std::size_t b) {
    auto out = std::make_shared<PairEstimate>();
    const PairKind kind = pair_kind(data.kind(a), data.kind(b));
    const PairTheta theta = estimate_pair(data.column(a), data.column(b), kind);
    const PsiMatrix psi = psi_samples(data.column(a), data.column(b), theta, kind);
    out->sigma = theta.sigma;
    out->theta = theta;
    out->xi = influence_samples(psi, psi_jacobian(theta, kind));
    return out;
}

} // namespace

std::shared_ptr<const PairEstimate> PairCache::get(const DataMatrix& data, std::size_t a,
                                                   std::size_t b) {
    const auto key = std::minmax(a, b);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
    auto est = estimate_one(data, key.first, key.second);
    map_.emplace(key, est);
    return est;
}

int CovModel::pair_index(int q, int k) const {
    if (q > k) std::swap(q, k);
    const int p = dim();
    return q * (2 * p - q - 1) / 2 + (k - q - 1);
}

double CovModel::xi(std::size_t l, int q, int k) const {
    if (q == k) return 0.0;
    return pairs[pair_index(q, k)]->xi[l];
}

namespace {

// skip_xi_01 defers the influence of subset pair (0,1): callers that
// re-evaluate that pair at another correlation never need its at-fit xi,
// and building it would reject tables whose fitted sigma sits at the clamp.
CovModel assemble_cov_impl(const DataMatrix& data, const std::vector<std::size_t>& subset,
                           PairCache* cache, bool skip_xi_01) {
    const int p = static_cast<int>(subset.size());
    if (p < 2) fail(ErrorCode::InvalidArgument, "assemble_cov: need at least two columns");
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
            if (subset[a] == subset[b])
                fail(ErrorCode::InvalidArgument, "assemble_cov: duplicate column in subset");

    CovModel cov;
    cov.n = data.rows();
    cov.sigma = Eigen::MatrixXd::Identity(p, p);
    cov.pairs.resize(static_cast<std::size_t>(p * (p - 1) / 2));
    for (int q = 0; q < p; ++q) {
        for (int k = q + 1; k < p; ++k) {
            std::shared_ptr<const PairEstimate> est;
            if (skip_xi_01 && q == 0 && k == 1) {
                const auto key = std::minmax(subset[0], subset[1]);
                const PairKind kind = pair_kind(data.kind(key.first), data.kind(key.second));
                auto bare = std::make_shared<PairEstimate>();
                bare->theta = estimate_pair(data.column(key.first), data.column(key.second), kind);
                bare->sigma = bare->theta.sigma;
                est = bare;
            } else if (cache) {
                est = cache->get(data, subset[q], subset[k]);
            } else {
                const auto key = std::minmax(subset[q], subset[k]);
                est = estimate_one(data, key.first, key.second);
            }
            cov.pairs[cov.pair_index(q, k)] = est;
            cov.sigma(q, k) = cov.sigma(k, q) = est->sigma;
        }
    }

    // Pairwise assembly can leave the matrix indefinite; clip the spectrum
    // and rescale the diagonal back to 1 before anyone inverts it.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov.sigma);
    if (eig.eigenvalues().minCoeff() < kEigFloor) {
        cov.pd_repaired = true;
        Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(kEigFloor);
        Eigen::MatrixXd fixed =
            eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
        Eigen::VectorXd d = fixed.diagonal().cwiseSqrt();
        for (int q = 0; q < p; ++q)
            for (int k = 0; k < p; ++k) fixed(q, k) /= d(q) * d(k);
        cov.sigma = 0.5 * (fixed + fixed.transpose());
    }
    return cov;
}

} // namespace

CovModel assemble_cov(const DataMatrix& data, const std::vector<std::size_t>& subset,
                      PairCache* cache) {
    return assemble_cov_impl(data, subset, cache, false);
}

namespace {

// Positions of the subset with j removed, then the inverse of that block.
std::vector<int> others_of(int p, int j) {
    std::vector<int> others;
    others.reserve(p - 1);
    for (int q = 0; q < p; ++q)
        if (q != j) others.push_back(q);
    return others;
}

Eigen::MatrixXd minor_inverse(const CovModel& cov, const std::vector<int>& others) {
    const int m = static_cast<int>(others.size());
    Eigen::MatrixXd block(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) block(a, b) = cov.sigma(others[a], others[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
    if (eig.eigenvalues().minCoeff() < kSingularTol)
        fail(ErrorCode::Singular, "conditioning block is numerically singular");
    return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
}

} // namespace

Eigen::VectorXd nodewise_beta(const CovModel& cov, int j) {
    const int p = cov.dim();
    if (j < 0 || j >= p) fail(ErrorCode::InvalidArgument, "nodewise_beta: bad position");
    const std::vector<int> others = others_of(p, j);
    const Eigen::MatrixXd inv = minor_inverse(cov, others);
    Eigen::VectorXd rhs(p - 1);
    for (int a = 0; a < p - 1; ++a) rhs(a) = cov.sigma(others[a], j);
    return inv * rhs;
}

double ci_variance(const CovModel& cov, int j, int k, const Eigen::VectorXd& beta) {
    const int p = cov.dim();
    if (j < 0 || j >= p || k < 0 || k >= p || j == k)
        fail(ErrorCode::InvalidArgument, "ci_variance: bad positions");
    const std::vector<int> others = others_of(p, j);
    const int m = p - 1;
    if (beta.size() != m) fail(ErrorCode::Shape, "ci_variance: beta has wrong length");
    const int kk = static_cast<int>(std::find(others.begin(), others.end(), k) - others.begin());

    const Eigen::MatrixXd inv = minor_inverse(cov, others);
    const Eigen::VectorXd u = inv.row(kk);
    Eigen::VectorXd w = beta;
    w(kk) = 0.0;

    // s_l = u^T Xi_l[-j,-j] w - u^T Xi_l[-j,j]; collect the nonzero terms
    // as (coefficient, xi-vector) pairs so the sweep over samples is flat.
    std::vector<std::pair<double, const std::vector<double>*>> terms;
    terms.reserve(static_cast<std::size_t>(m) * (m + 1) / 2 + m);
    for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            const double c = u(a) * w(b) + u(b) * w(a);
            if (c != 0.0)
                terms.emplace_back(c, &cov.pairs[cov.pair_index(others[a], others[b])]->xi);
        }
        if (u(a) != 0.0)
            terms.emplace_back(-u(a), &cov.pairs[cov.pair_index(others[a], j)]->xi);
    }

    double ss = 0.0;
    for (std::size_t l = 0; l < cov.n; ++l) {
        double s = 0.0;
        for (const auto& [c, xi] : terms) s += c * (*xi)[l];
        ss += s * s;
    }
    const double n = static_cast<double>(cov.n);
    return ss / (n * n);
}

CiResult dct_test(const DataMatrix& data, std::size_t i, std::size_t j,
                  const std::vector<std::size_t>& cond, double alpha, PairCache* cache) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "alpha outside (0,1)");
    if (i == j) fail(ErrorCode::InvalidArgument, "dct_test: i and j must differ");
    for (std::size_t c : cond)
        if (c == i || c == j) fail(ErrorCode::InvalidArgument, "dct_test: overlapping cond set");

    CiResult out;
    if (cond.empty()) {
        const PairKind kind = pair_kind(data.kind(i), data.kind(j));
        const PairInference pt = independence_test(data.column(i), data.column(j), kind, alpha);
        out.beta_hat = pt.theta.sigma;
        out.variance = pt.variance;
        out.z = pt.z;
        out.p_value = pt.p_value;
        out.independent = !pt.dependent;
        return out;
    }

    std::vector<std::size_t> subset;
    subset.reserve(cond.size() + 2);
    subset.push_back(i);
    subset.push_back(j);
    subset.insert(subset.end(), cond.begin(), cond.end());

    CovModel cov = assemble_cov(data, subset, cache);
    const Eigen::VectorXd beta = nodewise_beta(cov, 0);
    out.beta_hat = beta(0);  // position of X_j among the regressors
    out.variance = ci_variance(cov, 0, 1, beta);

    // A standard error this wide means some nuisance correlation in the
    // subset is close to unidentified; the test has no power anywhere in
    // the parameter range, so it refuses rather than reading the flat
    // likelihood as evidence of independence.
    if (std::sqrt(out.variance) > 0.25)
        fail(ErrorCode::Singular, "dct_test: standard error exceeds the power floor");
    out.pd_repaired = cov.pd_repaired;
    wald_pvalue(out.beta_hat, out.variance, out.z, out.p_value);
    out.independent = out.p_value > alpha;
    return out;
}

} // namespace disct
