#include "graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "error.hpp"

namespace disct {

Graph::Graph(int p) : p_(p) {
    if (p < 1) fail(ErrorCode::InvalidArgument, "graph needs at least one node");
    adj_.assign(static_cast<std::size_t>(p) * p, 0);
}

std::size_t Graph::idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= p_ || j >= p_ || i == j)
        fail(ErrorCode::InvalidArgument, "bad node pair");
    return static_cast<std::size_t>(i) * p_ + j;
}

void Graph::add_undirected(int i, int j) {
    adj_[idx(i, j)] = 1;
    adj_[idx(j, i)] = 1;
}

void Graph::add_directed(int i, int j) {
    adj_[idx(i, j)] = 1;
    adj_[idx(j, i)] = 0;
}

void Graph::remove_edge(int i, int j) {
    adj_[idx(i, j)] = 0;
    adj_[idx(j, i)] = 0;
}

void Graph::orient(int i, int j) {
    if (!adjacent(i, j)) fail(ErrorCode::InvalidArgument, "orient: no edge present");
    add_directed(i, j);
}

std::vector<int> Graph::neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && adjacent(i, j)) out.push_back(j);
    return out;
}

std::vector<int> Graph::undirected_neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && undirected(i, j)) out.push_back(j);
    return out;
}

std::vector<int> Graph::parents(int i) const {
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && directed(j, i)) out.push_back(j);
    return out;
}

std::vector<int> Graph::children(int i) const {
    std::vector<int> out;
    for (int j = 0; j < p_; ++j)
        if (j != i && directed(i, j)) out.push_back(j);
    return out;
}

std::size_t Graph::edge_count() const { return skeleton_edges().size(); }

std::vector<std::pair<int, int>> Graph::directed_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < p_; ++i)
        for (int j = 0; j < p_; ++j)
            if (i != j && directed(i, j)) out.emplace_back(i, j);
    return out;
}

std::vector<std::pair<int, int>> Graph::skeleton_edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < p_; ++i)
        for (int j = i + 1; j < p_; ++j)
            if (adjacent(i, j)) out.emplace_back(i, j);
    return out;
}

bool Graph::fully_directed() const {
    for (int i = 0; i < p_; ++i)
        for (int j = i + 1; j < p_; ++j)
            if (undirected(i, j)) return false;
    return true;
}

bool Graph::acyclic() const {
    // Kahn over the directed part
    std::vector<int> indeg(p_, 0);
    for (int i = 0; i < p_; ++i)
        for (int j = 0; j < p_; ++j)
            if (i != j && directed(i, j)) ++indeg[j];
    std::deque<int> q;
    for (int i = 0; i < p_; ++i)
        if (indeg[i] == 0) q.push_back(i);
    int seen = 0;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        ++seen;
        for (int v = 0; v < p_; ++v)
            if (v != u && directed(u, v) && --indeg[v] == 0) q.push_back(v);
    }
    return seen == p_;
}

Graph Graph::complete_undirected(int p) {
    Graph g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) g.add_undirected(i, j);
    return g;
}

Graph Graph::from_edges(int p, const std::vector<std::pair<int, int>>& directed) {
    Graph g(p);
    for (const auto& [i, j] : directed) g.add_directed(i, j);
    return g;
}

namespace {

Metrics from_counts(long tp, long fp, long fn, long shd) {
    Metrics m;
    m.shd = shd;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                                : (fn == 0 ? 1.0 : 0.0);
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

} // namespace

Metrics structure_metrics(const Graph& estimated, const Graph& truth, GraphMode mode) {
    if (estimated.size() != truth.size())
        fail(ErrorCode::Shape, "metrics: node counts differ");
    const int p = estimated.size();
    long tp = 0, fp = 0, fn = 0, shd = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const bool ae = estimated.adjacent(i, j);
            const bool at = truth.adjacent(i, j);
            if (mode == GraphMode::Skeleton) {
                if (ae && at) ++tp;
                else if (ae) { ++fp; ++shd; }
                else if (at) { ++fn; ++shd; }
                continue;
            }
            // DAG mode: orientation must match exactly; a present-but-
            // miswired pair costs one structural unit.
            if (!ae && !at) continue;
            if (ae && !at) { ++fp; ++shd; continue; }
            if (!ae && at) { ++fn; ++shd; continue; }
            const bool same = (estimated.arc(i, j) == truth.arc(i, j)) &&
                              (estimated.arc(j, i) == truth.arc(j, i));
            if (same) {
                ++tp;
            } else {
                ++fp;  // estimated pair is wired the wrong way
                ++fn;  // and the true orientation is missed
                ++shd;
            }
        }
    }
    return from_counts(tp, fp, fn, shd);
}

bool d_separated(const Graph& dag, int x, int y, const std::vector<int>& cond) {
    const int p = dag.size();
    if (x == y) fail(ErrorCode::InvalidArgument, "d_separated: x == y");
    std::vector<char> in_z(p, 0);
    for (int c : cond) {
        if (c == x || c == y) fail(ErrorCode::InvalidArgument, "d_separated: overlapping cond");
        in_z[c] = 1;
    }

    // ancestors of the conditioning set (including itself)
    std::vector<char> anc(p, 0);
    std::deque<int> q;
    for (int c : cond) {
        anc[c] = 1;
        q.push_back(c);
    }
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        for (int par : dag.parents(u))
            if (!anc[par]) {
                anc[par] = 1;
                q.push_back(par);
            }
    }

    // states (node, dir): dir 0 = trail arrived from a child (moving up),
    // dir 1 = arrived from a parent (moving down)
    std::vector<char> seen(static_cast<std::size_t>(p) * 2, 0);
    std::deque<std::pair<int, int>> frontier;
    frontier.emplace_back(x, 0);
    while (!frontier.empty()) {
        const auto [u, dir] = frontier.front();
        frontier.pop_front();
        if (seen[static_cast<std::size_t>(u) * 2 + dir]) continue;
        seen[static_cast<std::size_t>(u) * 2 + dir] = 1;
        if (u == y) return false;
        if (dir == 0 && !in_z[u]) {
            for (int par : dag.parents(u)) frontier.emplace_back(par, 0);
            for (int ch : dag.children(u)) frontier.emplace_back(ch, 1);
        } else if (dir == 1) {
            if (!in_z[u])
                for (int ch : dag.children(u)) frontier.emplace_back(ch, 1);
            if (anc[u])
                for (int par : dag.parents(u)) frontier.emplace_back(par, 0);
        }
    }
    return true;
}

} // namespace disct
