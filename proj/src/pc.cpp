#include "pc.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <set>

#include "error.hpp"
#include "normal.hpp"

namespace disct {

double DctTester::pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                         const std::vector<std::size_t>& cond, double alpha) {
    return dct_test(data, i, j, cond, alpha, &cache_).p_value;
}

double FisherZTester::pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                             const std::vector<std::size_t>& cond, double) {
    return fisher_z_pvalue(data, i, j, cond);
}

double ChiSquareTester::pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                               const std::vector<std::size_t>& cond, double) {
    return chi_square_pvalue(data, i, j, cond);
}

double DSeparationTester::pvalue(const DataMatrix&, std::size_t i, std::size_t j,
                                 const std::vector<std::size_t>& cond, double) {
    std::vector<int> z(cond.begin(), cond.end());
    return d_separated(truth_, static_cast<int>(i), static_cast<int>(j), z) ? 1.0 : 0.0;
}

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        ma += a[l];
        mb += b[l];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        sab += (a[l] - ma) * (b[l] - mb);
        saa += (a[l] - ma) * (a[l] - ma);
        sbb += (b[l] - mb) * (b[l] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0))
        fail(ErrorCode::DegenerateColumn, "fisher_z: constant column");
    return sab / std::sqrt(saa * sbb);
}

} // namespace

double fisher_z_pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                       const std::vector<std::size_t>& cond) {
    const std::size_t n = data.rows();
    const double df = static_cast<double>(n) - static_cast<double>(cond.size()) - 3.0;
    if (df <= 0.0) fail(ErrorCode::Shape, "fisher_z: sample too small for |cond|");

    double r;
    if (cond.empty()) {
        r = pearson(data.column(i), data.column(j));
    } else {
        std::vector<std::size_t> cols;
        cols.push_back(i);
        cols.push_back(j);
        cols.insert(cols.end(), cond.begin(), cond.end());
        const int m = static_cast<int>(cols.size());
        Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                corr(a, b) = corr(b, a) = pearson(data.column(cols[a]), data.column(cols[b]));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
        if (eig.eigenvalues().minCoeff() < 1e-12)
            fail(ErrorCode::Singular, "fisher_z: singular correlation matrix");
        const Eigen::MatrixXd prec = eig.eigenvectors() *
                                     eig.eigenvalues().cwiseInverse().asDiagonal() *
                                     eig.eigenvectors().transpose();
        r = -prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1));
    }
    r = std::clamp(r, -(1.0 - 1e-15), 1.0 - 1e-15);
    const double z = std::sqrt(df) * std::atanh(r);
    return 2.0 * std_normal_sf(std::abs(z));
}

double chi_square_pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                         const std::vector<std::size_t>& cond) {
    std::vector<std::size_t> involved;
    involved.push_back(i);
    involved.push_back(j);
    involved.insert(involved.end(), cond.begin(), cond.end());
    for (std::size_t c : involved)
        if (data.kind(c) != ColumnKind::Discretized)
            fail(ErrorCode::InvalidArgument, "chi_square: column " + data.name(c) +
                                                 " is not discretized");

    const std::size_t n = data.rows();
    const auto codes_of = [&](std::size_t col) {
        std::vector<double> levels(data.column(col));
        std::sort(levels.begin(), levels.end());
        levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
        std::vector<int> codes(n);
        for (std::size_t l = 0; l < n; ++l)
            codes[l] = static_cast<int>(
                std::lower_bound(levels.begin(), levels.end(), data.column(col)[l]) -
                levels.begin());
        return std::make_pair(codes, static_cast<int>(levels.size()));
    };

    const auto [ci, ri] = codes_of(i);
    const auto [cj, rj] = codes_of(j);

    // stratum id = mixed radix over the conditioning codes
    std::vector<long> stratum(n, 0);
    long strata = 1;
    for (std::size_t c : cond) {
        const auto [cc, rc] = codes_of(c);
        for (std::size_t l = 0; l < n; ++l) stratum[l] = stratum[l] * rc + cc[l];
        strata *= rc;
    }

    std::map<long, std::vector<long>> tables;  // stratum -> ri x rj counts
    for (std::size_t l = 0; l < n; ++l) {
        auto& t = tables[stratum[l]];
        if (t.empty()) t.assign(static_cast<std::size_t>(ri) * rj, 0);
        ++t[static_cast<std::size_t>(ci[l]) * rj + cj[l]];
    }

    double chi2 = 0.0;
    long df = 0;
    for (const auto& [sid, t] : tables) {
        std::vector<long> rowm(ri, 0), colm(rj, 0);
        long tot = 0;
        for (int a = 0; a < ri; ++a)
            for (int b = 0; b < rj; ++b) {
                rowm[a] += t[static_cast<std::size_t>(a) * rj + b];
                colm[b] += t[static_cast<std::size_t>(a) * rj + b];
                tot += t[static_cast<std::size_t>(a) * rj + b];
            }
        const long reff = std::count_if(rowm.begin(), rowm.end(), [](long v) { return v > 0; });
        const long ceff = std::count_if(colm.begin(), colm.end(), [](long v) { return v > 0; });
        if (tot == 0 || reff < 2 || ceff < 2) continue;  // degenerate stratum: skip
        df += (reff - 1) * (ceff - 1);
        for (int a = 0; a < ri; ++a) {
            if (rowm[a] == 0) continue;
            for (int b = 0; b < rj; ++b) {
                if (colm[b] == 0) continue;
                const double e = static_cast<double>(rowm[a]) * colm[b] / static_cast<double>(tot);
                const double o = static_cast<double>(t[static_cast<std::size_t>(a) * rj + b]);
                chi2 += (o - e) * (o - e) / e;
            }
        }
    }
    if (df <= 0)
        fail(ErrorCode::DegenerateColumn, "chi_square: every stratum is degenerate");
    const boost::math::chi_squared dist(static_cast<double>(df));
    return boost::math::cdf(boost::math::complement(dist, chi2));
}

namespace {

// lexicographic size-d subsets of pool (already sorted ascending)
bool next_combination(std::vector<int>& pick, int pool_size) {
    const int d = static_cast<int>(pick.size());
    int t = d - 1;
    while (t >= 0 && pick[t] == pool_size - d + t) --t;
    if (t < 0) return false;
    ++pick[t];
    for (int q = t + 1; q < d; ++q) pick[q] = pick[q - 1] + 1;
    return true;
}

} // namespace

SkeletonResult pc_skeleton(const DataMatrix& data, CiTester& tester, double alpha,
                           int max_depth) {
    const int p = static_cast<int>(data.cols());
    SkeletonResult res{Graph::complete_undirected(p), {}, 0, 0};

    for (int depth = 0;; ++depth) {
        if (max_depth >= 0 && depth > max_depth) break;
        // frozen adjacency for this whole depth
        std::vector<std::vector<int>> adj(p);
        bool any = false;
        for (int i = 0; i < p; ++i) {
            adj[i] = res.graph.neighbors(i);
            if (static_cast<int>(adj[i].size()) - 1 >= depth) any = true;
        }
        if (!any) break;

        for (int i = 0; i < p; ++i) {
            for (int j : adj[i]) {
                if (!res.graph.adjacent(i, j)) continue;  // removed earlier this depth
                std::vector<int> pool;
                pool.reserve(adj[i].size());
                for (int v : adj[i])
                    if (v != j) pool.push_back(v);
                if (static_cast<int>(pool.size()) < depth) continue;

                std::vector<int> pick(depth);
                for (int q = 0; q < depth; ++q) pick[q] = q;
                do {
                    std::vector<std::size_t> cond;
                    cond.reserve(depth);
                    for (int q : pick) cond.push_back(static_cast<std::size_t>(pool[q]));
                    ++res.tests_run;
                    double pv;
                    try {
                        pv = tester.pvalue(data, static_cast<std::size_t>(i),
                                           static_cast<std::size_t>(j), cond, alpha);
                    } catch (const DisctError&) {
                        ++res.failed_tests;
                        if (depth == 0) {
                            // Marginal refusal means the pair's own table is
                            // pinned at a distribution bound: no association
                            // is demonstrable, so the edge does not survive.
                            res.graph.remove_edge(i, j);
                            res.sepsets[std::minmax(i, j)] = {};
                            break;
                        }
                        continue;  // conditioning failed: no decision on this set
                    }
                    if (pv > alpha) {
                        res.graph.remove_edge(i, j);
                        std::vector<int> sep(cond.begin(), cond.end());
                        res.sepsets[std::minmax(i, j)] = std::move(sep);
                        break;
                    }
                } while (next_combination(pick, static_cast<int>(pool.size())));
            }
        }
    }
    return res;
}

OrientResult orient_colliders_meek(const Graph& skeleton, const SepsetTable& sepsets) {
    OrientResult res{skeleton, 0, true};
    Graph& g = res.graph;
    const int p = g.size();

    // unshielded triples i - k - j with i, j nonadjacent; collider when k
    // is outside the separating set. First orientation wins.
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (g.adjacent(i, j)) continue;
            const auto it = sepsets.find({i, j});
            if (it == sepsets.end()) continue;
            const std::vector<int>& sep = it->second;
            for (int k = 0; k < p; ++k) {
                if (k == i || k == j || !g.adjacent(i, k) || !g.adjacent(j, k)) continue;
                if (std::find(sep.begin(), sep.end(), k) != sep.end()) continue;
                const bool into_i = g.directed(k, i);
                const bool into_j = g.directed(k, j);
                if (into_i || into_j) {
                    ++res.collider_conflicts;  // an earlier collider claimed k's edge
                    continue;
                }
                if (g.adjacent(i, k)) g.orient(i, k);
                if (g.adjacent(j, k)) g.orient(j, k);
            }
        }
    }

    // Meek propagation to closure
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < p; ++a) {
            for (int b = 0; b < p; ++b) {
                if (a == b || !g.undirected(a, b)) continue;
                bool orient_ab = false;
                // R1: c -> a, a - b, c and b nonadjacent
                for (int c = 0; c < p && !orient_ab; ++c)
                    if (c != a && c != b && g.directed(c, a) && !g.adjacent(c, b))
                        orient_ab = true;
                // R2: a -> c -> b with a - b
                for (int c = 0; c < p && !orient_ab; ++c)
                    if (c != a && c != b && g.directed(a, c) && g.directed(c, b))
                        orient_ab = true;
                // R3: a - c -> b, a - d -> b, c and d nonadjacent
                if (!orient_ab) {
                    for (int c = 0; c < p && !orient_ab; ++c) {
                        if (c == a || c == b || !g.undirected(a, c) || !g.directed(c, b))
                            continue;
                        for (int d = c + 1; d < p && !orient_ab; ++d)
                            if (d != a && d != b && g.undirected(a, d) && g.directed(d, b) &&
                                !g.adjacent(c, d))
                                orient_ab = true;
                    }
                }
                if (orient_ab) {
                    g.orient(a, b);
                    changed = true;
                }
            }
        }
    }
    return res;
}

OrientResult extend_to_dag(const OrientResult& pdag) {
    OrientResult res = pdag;
    Graph& g = res.graph;
    const int p = g.size();
    std::vector<char> live(p, 1);

    // sink elimination: a node with no outgoing arcs whose undirected
    // neighbors are adjacent to all its other neighbors can absorb its
    // undirected edges as incoming.
    int remaining = p;
    while (remaining > 0) {
        int picked = -1;
        for (int x = 0; x < p && picked < 0; ++x) {
            if (!live[x]) continue;
            bool sink = true;
            for (int y = 0; y < p && sink; ++y)
                if (y != x && live[y] && g.directed(x, y)) sink = false;
            if (!sink) continue;
            const auto und = [&] {
                std::vector<int> u;
                for (int y : g.undirected_neighbors(x))
                    if (live[y]) u.push_back(y);
                return u;
            }();
            bool ok = true;
            for (int y : und) {
                for (int z : g.neighbors(x)) {
                    if (z == y || !live[z]) continue;
                    if (!g.adjacent(y, z)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) picked = x;
        }
        if (picked < 0) break;  // not extendable
        for (int y : g.undirected_neighbors(picked))
            if (live[y]) g.orient(y, picked);
        live[picked] = 0;
        --remaining;
    }

    if (remaining > 0) {
        // leftover undirected edges: orient one at a time without
        // creating a directed cycle
        res.extension_ok = false;
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                if (!g.undirected(i, j)) continue;
                g.orient(i, j);
                if (!g.acyclic()) g.orient(j, i);
            }
        }
    }
    return res;
}

DiscoverResult discover(const DataMatrix& data, CiTester& tester, double alpha, GraphMode mode,
                        int max_depth) {
    SkeletonResult sk = pc_skeleton(data, tester, alpha, max_depth);
    if (mode == GraphMode::Skeleton)
        return {sk.graph, sk.tests_run, sk.failed_tests, 0, true};
    OrientResult pdag = orient_colliders_meek(sk.graph, sk.sepsets);
    OrientResult dag = extend_to_dag(pdag);
    return {dag.graph, sk.tests_run, sk.failed_tests, pdag.collider_conflicts,
            dag.extension_ok};
}

} // namespace disct
