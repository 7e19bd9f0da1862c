#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace disct {

// Mixed graph over p nodes. An undirected edge stores both arcs, a
// directed edge i->j only adj[i][j]. Good for skeletons, partially
// oriented graphs, and DAGs alike.
class Graph {
public:
    explicit Graph(int p);

    int size() const { return p_; }

    bool arc(int i, int j) const { return adj_[idx(i, j)] != 0; }
    bool adjacent(int i, int j) const { return arc(i, j) || arc(j, i); }
    bool directed(int i, int j) const { return arc(i, j) && !arc(j, i); }
    bool undirected(int i, int j) const { return arc(i, j) && arc(j, i); }

    void add_undirected(int i, int j);
    void add_directed(int i, int j);
    void remove_edge(int i, int j);
    // collapse an existing adjacency into i -> j
    void orient(int i, int j);

    std::vector<int> neighbors(int i) const;             // any adjacency
    std::vector<int> undirected_neighbors(int i) const;
    std::vector<int> parents(int i) const;
    std::vector<int> children(int i) const;

    std::size_t edge_count() const;                       // unordered
    std::vector<std::pair<int, int>> directed_edges() const;
    std::vector<std::pair<int, int>> skeleton_edges() const;  // i < j

    bool fully_directed() const;
    bool acyclic() const;  // ignores undirected edges

    static Graph complete_undirected(int p);
    static Graph from_edges(int p, const std::vector<std::pair<int, int>>& directed);

private:
    std::size_t idx(int i, int j) const;
    int p_;
    std::vector<unsigned char> adj_;
};

enum class GraphMode { Skeleton, Dag };

struct Metrics {
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    long shd = 0;
};

// Skeleton mode compares unordered adjacencies; DAG mode credits exact
// orientations only, and a reversed edge costs one SHD unit.
Metrics structure_metrics(const Graph& estimated, const Graph& truth, GraphMode mode);

// Classic reachability check over the DAG: true when every path between
// x and y is blocked by the conditioning set.
bool d_separated(const Graph& dag, int x, int y, const std::vector<int>& cond);

} // namespace disct
