#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "data.hpp"
#include "graph.hpp"

namespace disct {

enum class NoiseKind { Gaussian, StudentT3, Uniform, Exponential };
enum class Nonlinearity { None, Sin, Cube, Tanh, Relu };
enum class MonotoneG { Identity, Exp, Cube };

// Random DAG with exactly `edges` arcs: order the nodes by a random
// permutation and draw the arc slots uniformly among the forward pairs.
Graph gen_dag_bp(int p, int edges, std::uint64_t seed);

// Linear-SEM specification. weights follow Graph::directed_edges() order.
// Every noise family is scaled to unit variance so tail weight is the
// only thing that changes between families.
struct SemSpec {
    Graph dag;
    std::vector<double> weights;
    NoiseKind noise = NoiseKind::Gaussian;
    Nonlinearity f = Nonlinearity::None;
};

std::vector<double> draw_weights(const Graph& dag, double lo, double hi, std::uint64_t seed);

// Ancestral sampling of X_v = f(sum_w w * X_parent + noise); columns are
// standardized and named x1..xp, all continuous.
DataMatrix sample_sem(const SemSpec& spec, std::size_t n, std::uint64_t seed);

// Monotone transform then thresholding into level codes 1..levels.
// Without explicit boundaries, the levels-1 cuts are drawn uniformly from
// the transformed column's range; a draw leaving empty levels is retried
// up to 10 times, after which at least two occupied levels are required.
// Explicit boundaries are interpreted on the transformed scale.
struct DiscretizeSpec {
    int levels = 2;
    MonotoneG g = MonotoneG::Identity;
    std::optional<std::vector<std::vector<double>>> boundaries;  // per target column
};

DataMatrix discretize(const DataMatrix& data, const std::vector<std::size_t>& which,
                      const DiscretizeSpec& spec, std::uint64_t seed);

enum class ScenarioKind { NullCI, AltCI };
enum class PairType { Continuous, Mixed, Discrete };

// Columns [y, w, z1..zD]. Null: y and w are driven by the shared parents
// z (conditionally independent given z). Alt: the z are common children
// of independent y and w (conditioning opens the collider). Conditioning
// columns are always discretized; y/w follow the pair type (Mixed
// discretizes y).
struct ScenarioData {
    DataMatrix data;
    DataMatrix raw;  // same draw before any discretization
    bool truth_independent;
};

ScenarioData gen_scenario(ScenarioKind kind, std::size_t n, int cond_dim, PairType pair_type,
                          int levels, std::uint64_t seed);

} // namespace disct
