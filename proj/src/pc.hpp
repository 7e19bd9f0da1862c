#pragma once

#include <map>
#include <memory>
#include <vector>

#include "ci_test.hpp"
#include "data.hpp"
#include "graph.hpp"

namespace disct {

// Conditional-independence oracle used by the PC search. Implementations
// return a p-value; the search removes an edge when p > alpha.
class CiTester {
public:
    virtual ~CiTester() = default;
    virtual double pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                          const std::vector<std::size_t>& cond, double alpha) = 0;
};

class DctTester : public CiTester {
public:
    double pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                  const std::vector<std::size_t>& cond, double alpha) override;

private:
    PairCache cache_;
};

// Partial correlation on the raw column values (discretized codes are
// taken at face value), Fisher-transformed.
class FisherZTester : public CiTester {
public:
    double pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                  const std::vector<std::size_t>& cond, double alpha) override;
};

// Stratified contingency test; every involved column must be discretized.
// Strata with degenerate margins are dropped with the df reduced to match.
class ChiSquareTester : public CiTester {
public:
    double pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                  const std::vector<std::size_t>& cond, double alpha) override;
};

// Exact graph oracle for validation: p = 1 when d-separated, else 0.
class DSeparationTester : public CiTester {
public:
    explicit DSeparationTester(Graph truth) : truth_(std::move(truth)) {}
    double pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                  const std::vector<std::size_t>& cond, double alpha) override;

private:
    Graph truth_;
};

double fisher_z_pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                       const std::vector<std::size_t>& cond);
double chi_square_pvalue(const DataMatrix& data, std::size_t i, std::size_t j,
                         const std::vector<std::size_t>& cond);

using SepsetTable = std::map<std::pair<int, int>, std::vector<int>>;

struct SkeletonResult {
    Graph graph;
    SepsetTable sepsets;
    long tests_run = 0;
    long failed_tests = 0;  // tester errors; the edge is kept
};

// Order-stable PC skeleton: adjacency sets are snapshotted per depth,
// nodes are visited in ascending order, conditioning subsets are
// enumerated lexicographically, and an edge is removed on the first
// accepted independence.
SkeletonResult pc_skeleton(const DataMatrix& data, CiTester& tester, double alpha,
                           int max_depth = -1);

struct OrientResult {
    Graph graph;
    long collider_conflicts = 0;  // later colliders that lost first-writer-wins
    bool extension_ok = true;     // consistent extension found without fallback
};

// Collider orientation followed by the Meek propagation rules; leaves a
// partially directed graph.
OrientResult orient_colliders_meek(const Graph& skeleton, const SepsetTable& sepsets);

// Consistent-extension step (sink elimination); falls back to acyclic
// edge-by-edge orientation when no consistent extension exists.
OrientResult extend_to_dag(const OrientResult& pdag);

struct DiscoverResult {
    Graph graph;
    long tests_run = 0;
    long failed_tests = 0;
    long collider_conflicts = 0;
    bool extension_ok = true;
};

// Full pipeline: skeleton, then (in DAG mode) orientation and extension.
DiscoverResult discover(const DataMatrix& data, CiTester& tester, double alpha, GraphMode mode,
                        int max_depth = -1);

} // namespace disct
