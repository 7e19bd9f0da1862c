#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "error.hpp"
#include "rng.hpp"

namespace disct {

namespace {

constexpr std::uint64_t kTagDag = 0x6461675f73656564ull;
constexpr std::uint64_t kTagWeight = 0x7765696768740000ull;
constexpr std::uint64_t kTagNoise = 0x6e6f697365000000ull;
constexpr std::uint64_t kTagCut = 0x6375740000000000ull;
constexpr std::uint64_t kTagCoef = 0x636f656600000000ull;

std::vector<int> topological_order(const Graph& g) {
    const int p = g.size();
    std::vector<int> indeg(p, 0);
    for (const auto& [a, b] : g.directed_edges()) ++indeg[b];
    std::deque<int> q;
    for (int v = 0; v < p; ++v)
        if (indeg[v] == 0) q.push_back(v);
    std::vector<int> order;
    while (!q.empty()) {
        const int u = q.front();
        q.pop_front();
        order.push_back(u);
        for (int v : g.children(u))
            if (--indeg[v] == 0) q.push_back(v);
    }
    if (static_cast<int>(order.size()) != p)
        fail(ErrorCode::InvalidArgument, "sample_sem: graph has a cycle");
    return order;
}

double apply_nonlinearity(Nonlinearity f, double x) {
    switch (f) {
        case Nonlinearity::None: return x;
        case Nonlinearity::Sin: return std::sin(x);
        case Nonlinearity::Cube: return x * x * x;
        case Nonlinearity::Tanh: return std::tanh(x);
        case Nonlinearity::Relu: return x > 0.0 ? x : 0.0;
    }
    fail(ErrorCode::InvalidArgument, "unknown nonlinearity");
}

double draw_noise(NoiseKind kind, RngStream& rng) {
    switch (kind) {
        case NoiseKind::Gaussian: return rng.normal();
        case NoiseKind::StudentT3: return rng.student_t3();
        case NoiseKind::Uniform: return rng.uniform(-1.7320508075688772, 1.7320508075688772);
        case NoiseKind::Exponential: return rng.exponential1();
    }
    fail(ErrorCode::InvalidArgument, "unknown noise kind");
}

double apply_g(MonotoneG g, double x) {
    switch (g) {
        case MonotoneG::Identity: return x;
        case MonotoneG::Exp: return std::exp(x);
        case MonotoneG::Cube: return x * x * x;
    }
    fail(ErrorCode::InvalidArgument, "unknown monotone transform");
}

std::vector<double> discretize_column(const std::vector<double>& raw, int levels, MonotoneG g,
                                      const std::vector<double>* fixed_cuts, RngStream& rng) {
    const std::size_t n = raw.size();
    std::vector<double> y(n);
    for (std::size_t l = 0; l < n; ++l) y[l] = apply_g(g, raw[l]);

    const auto code_with = [&](const std::vector<double>& cuts, std::vector<double>& out) {
        std::vector<int> occupied(static_cast<std::size_t>(levels), 0);
        for (std::size_t l = 0; l < n; ++l) {
            int c = 0;
            for (double b : cuts)
                if (y[l] > b) ++c;
            out[l] = static_cast<double>(c + 1);
            occupied[c] = 1;
        }
        return std::count(occupied.begin(), occupied.end(), 1);
    };

    std::vector<double> codes(n);
    if (fixed_cuts) {
        if (static_cast<int>(fixed_cuts->size()) != levels - 1)
            fail(ErrorCode::InvalidArgument, "discretize: need levels-1 boundaries");
        std::vector<double> cuts = *fixed_cuts;
        std::sort(cuts.begin(), cuts.end());
        code_with(cuts, codes);
        return codes;
    }

    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    if (!(*mx > *mn)) fail(ErrorCode::DegenerateColumn, "discretize: constant column");
    long best = -1;
    for (int attempt = 0; attempt < 11; ++attempt) {
        std::vector<double> cuts(static_cast<std::size_t>(levels - 1));
        for (auto& b : cuts) b = rng.uniform(*mn, *mx);
        std::sort(cuts.begin(), cuts.end());
        best = code_with(cuts, codes);
        if (best == levels) return codes;
    }
    if (best < 2) fail(ErrorCode::DegenerateColumn, "discretize: column collapsed to one level");
    return codes;  // some inner levels may be empty; still usable
}

} // namespace

Graph gen_dag_bp(int p, int edges, std::uint64_t seed) {
    if (p < 1) fail(ErrorCode::InvalidArgument, "gen_dag_bp: p must be positive");
    const long maxe = static_cast<long>(p) * (p - 1) / 2;
    if (edges < 0 || edges > maxe)
        fail(ErrorCode::InvalidArgument, "gen_dag_bp: edge count out of range");

    RngStream rng(seed, derive_stream({kTagDag}));
    std::vector<int> perm(p);
    for (int v = 0; v < p; ++v) perm[v] = v;
    for (int v = p - 1; v > 0; --v)
        std::swap(perm[v], perm[static_cast<int>(rng.below(static_cast<std::uint64_t>(v + 1)))]);

    std::vector<std::pair<int, int>> slots;
    slots.reserve(static_cast<std::size_t>(maxe));
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b) slots.emplace_back(a, b);
    for (int e = 0; e < edges; ++e) {
        const auto r = e + static_cast<int>(
                               rng.below(static_cast<std::uint64_t>(slots.size() - e)));
        std::swap(slots[e], slots[r]);
    }

    Graph g(p);
    for (int e = 0; e < edges; ++e)
        g.add_directed(perm[slots[e].first], perm[slots[e].second]);
    return g;
}

std::vector<double> draw_weights(const Graph& dag, double lo, double hi, std::uint64_t seed) {
    RngStream rng(seed, derive_stream({kTagWeight}));
    std::vector<double> w(dag.directed_edges().size());
    for (auto& x : w) x = rng.uniform(lo, hi);
    return w;
}

DataMatrix sample_sem(const SemSpec& spec, std::size_t n, std::uint64_t seed) {
    const int p = spec.dag.size();
    const auto edges = spec.dag.directed_edges();
    if (spec.weights.size() != edges.size())
        fail(ErrorCode::Shape, "sample_sem: weights do not match edges");
    if (n < 2) fail(ErrorCode::InvalidArgument, "sample_sem: n too small");

    // weight lookup by (parent, child)
    std::vector<std::vector<std::pair<int, double>>> in_edges(p);
    for (std::size_t e = 0; e < edges.size(); ++e)
        in_edges[edges[e].second].emplace_back(edges[e].first, spec.weights[e]);

    std::vector<std::vector<double>> cols(p, std::vector<double>(n, 0.0));
    for (int v : topological_order(spec.dag)) {
        RngStream rng(seed, derive_stream({kTagNoise, static_cast<std::uint64_t>(v)}));
        auto& x = cols[v];
        for (std::size_t l = 0; l < n; ++l) {
            double acc = draw_noise(spec.noise, rng);
            for (const auto& [par, w] : in_edges[v]) acc += w * cols[par][l];
            x[l] = apply_nonlinearity(spec.f, acc);
        }
    }

    std::vector<ColumnKind> kinds(p, ColumnKind::Continuous);
    std::vector<std::string> names(p);
    for (int v = 0; v < p; ++v) names[v] = "x" + std::to_string(v + 1);
    return DataMatrix(std::move(cols), std::move(kinds), std::move(names));
}

DataMatrix discretize(const DataMatrix& data, const std::vector<std::size_t>& which,
                      const DiscretizeSpec& spec, std::uint64_t seed) {
    if (spec.levels < 2) fail(ErrorCode::InvalidArgument, "discretize: levels must be >= 2");
    if (spec.boundaries && spec.boundaries->size() != which.size())
        fail(ErrorCode::Shape, "discretize: boundaries do not match target count");

    std::vector<std::vector<double>> cols;
    std::vector<ColumnKind> kinds;
    std::vector<std::string> names;
    cols.reserve(data.cols());
    for (std::size_t j = 0; j < data.cols(); ++j) {
        cols.push_back(data.column(j));
        kinds.push_back(data.kind(j));
        names.push_back(data.name(j));
    }
    for (std::size_t t = 0; t < which.size(); ++t) {
        const std::size_t j = which[t];
        if (j >= data.cols()) fail(ErrorCode::InvalidArgument, "discretize: bad column index");
        RngStream rng(seed, derive_stream({kTagCut, static_cast<std::uint64_t>(j)}));
        const std::vector<double>* fixed = spec.boundaries ? &(*spec.boundaries)[t] : nullptr;
        cols[j] = discretize_column(cols[j], spec.levels, spec.g, fixed, rng);
        kinds[j] = ColumnKind::Discretized;
    }
    return DataMatrix(std::move(cols), std::move(kinds), std::move(names));
}

ScenarioData gen_scenario(ScenarioKind kind, std::size_t n, int cond_dim, PairType pair_type,
                          int levels, std::uint64_t seed) {
    if (cond_dim < 1) fail(ErrorCode::InvalidArgument, "gen_scenario: cond_dim must be >= 1");
    if (n < 2) fail(ErrorCode::InvalidArgument, "gen_scenario: n too small");

    const int p = cond_dim + 2;
    RngStream coef(seed, derive_stream({kTagCoef}));
    std::vector<double> ay(cond_dim), aw(cond_dim);
    for (int d = 0; d < cond_dim; ++d) {
        ay[d] = coef.uniform(0.5, 1.5);
        aw[d] = coef.uniform(0.5, 1.5);
    }

    std::vector<std::vector<double>> cols(p, std::vector<double>(n, 0.0));
    // columns: 0 = y, 1 = w, 2.. = z
    RngStream ry(seed, derive_stream({kTagNoise, 0}));
    RngStream rw(seed, derive_stream({kTagNoise, 1}));
    std::vector<RngStream> rz;
    rz.reserve(cond_dim);
    for (int d = 0; d < cond_dim; ++d)
        rz.emplace_back(seed, derive_stream({kTagNoise, static_cast<std::uint64_t>(2 + d)}));

    for (std::size_t l = 0; l < n; ++l) {
        if (kind == ScenarioKind::NullCI) {
            double y = ry.normal(), w = rw.normal();
            for (int d = 0; d < cond_dim; ++d) {
                const double z = rz[d].normal();
                cols[2 + d][l] = z;
                y += ay[d] * z;
                w += aw[d] * z;
            }
            cols[0][l] = y;
            cols[1][l] = w;
        } else {
            const double y = ry.normal(), w = rw.normal();
            cols[0][l] = y;
            cols[1][l] = w;
            for (int d = 0; d < cond_dim; ++d)
                cols[2 + d][l] = ay[d] * y + aw[d] * w + rz[d].normal();
        }
    }

    std::vector<ColumnKind> kinds(p, ColumnKind::Continuous);
    std::vector<std::string> names(p);
    names[0] = "y";
    names[1] = "w";
    for (int d = 0; d < cond_dim; ++d) names[2 + d] = "z" + std::to_string(d + 1);

    DataMatrix raw(std::move(cols), kinds, names);
    std::vector<std::size_t> which;
    for (int d = 0; d < cond_dim; ++d) which.push_back(static_cast<std::size_t>(2 + d));
    if (pair_type != PairType::Continuous) which.insert(which.begin(), 0);
    if (pair_type == PairType::Discrete) which.insert(which.begin() + 1, 1);

    DiscretizeSpec dspec;
    dspec.levels = levels;
    DataMatrix data = discretize(raw, which, dspec, seed);
    return {std::move(data), std::move(raw), kind == ScenarioKind::NullCI};
}

} // namespace disct
