#include "disct/disct.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "ci_test.hpp"
#include "data.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "graph.hpp"
#include "pc.hpp"
#include "synth.hpp"

using namespace disct;

struct disct_dataset {
    DataMatrix data;
};

namespace {

thread_local std::string g_last_error;

disct_status code_of(const DisctError& e) {
    switch (e.code()) {
        case ErrorCode::InvalidArgument: return DISCT_EINVAL;
        case ErrorCode::Parse: return DISCT_EPARSE;
        case ErrorCode::Shape: return DISCT_ESHAPE;
        case ErrorCode::DegenerateColumn: return DISCT_EDEGENERATE;
        case ErrorCode::Singular: return DISCT_ESINGULAR;
        case ErrorCode::Io: return DISCT_EIO;
    }
    return DISCT_EUNKNOWN;
}

template <class F>
disct_status guarded(F&& body) {
    try {
        body();
        return DISCT_OK;
    } catch (const DisctError& e) {
        g_last_error = e.what();
        return code_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return DISCT_EUNKNOWN;
    } catch (...) {
        g_last_error = "unknown error";
        return DISCT_EUNKNOWN;
    }
}

std::vector<std::size_t> cond_vector(const int32_t* cond, int32_t cond_len) {
    if (cond_len < 0) fail(ErrorCode::InvalidArgument, "negative cond length");
    std::vector<std::size_t> out;
    out.reserve(static_cast<std::size_t>(cond_len));
    for (int32_t q = 0; q < cond_len; ++q) {
        if (cond[q] < 0) fail(ErrorCode::InvalidArgument, "negative cond index");
        out.push_back(static_cast<std::size_t>(cond[q]));
    }
    return out;
}

void require(bool ok, const char* what) {
    if (!ok) fail(ErrorCode::InvalidArgument, what);
}

Graph graph_from_flat(const int32_t* adj, int32_t p) {
    Graph g(p);
    for (int32_t i = 0; i < p; ++i)
        for (int32_t j = 0; j < p; ++j)
            if (i != j && adj[static_cast<std::size_t>(i) * p + j]) g.add_undirected(i, j);
    // second pass restores one-sided arcs
    for (int32_t i = 0; i < p; ++i)
        for (int32_t j = 0; j < p; ++j) {
            const bool ij = adj[static_cast<std::size_t>(i) * p + j] != 0;
            const bool ji = adj[static_cast<std::size_t>(j) * p + i] != 0;
            if (i != j && ij && !ji) g.add_directed(i, j);
        }
    return g;
}

void graph_to_flat(const Graph& g, int32_t* adj) {
    const int p = g.size();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            adj[static_cast<std::size_t>(i) * p + j] = (i != j && g.arc(i, j)) ? 1 : 0;
}

TestKind method_to_kind(int32_t m) {
    switch (m) {
        case DISCT_TEST_DCT: return TestKind::Dct;
        case DISCT_TEST_FISHERZ: return TestKind::FisherZ;
        case DISCT_TEST_CHISQ: return TestKind::ChiSq;
        case DISCT_TEST_FISHERZ_NODIS: return TestKind::FisherZNoDis;
    }
    fail(ErrorCode::InvalidArgument, "unknown test method");
}

SweepConfig sweep_from_c(const disct_sweep_config* cfg) {
    SweepConfig out;
    if (cfg->n_count > 0) {
        out.n_grid.clear();
        for (int32_t q = 0; q < cfg->n_count; ++q)
            out.n_grid.push_back(static_cast<std::size_t>(cfg->n_grid[q]));
    }
    if (cfg->d_count > 0) out.d_grid.assign(cfg->d_grid, cfg->d_grid + cfg->d_count);
    if (cfg->k_count > 0) out.k_grid.assign(cfg->k_grid, cfg->k_grid + cfg->k_count);
    if (cfg->pair_type_count > 0) {
        out.pair_types.clear();
        for (int32_t q = 0; q < cfg->pair_type_count; ++q) {
            require(cfg->pair_types[q] >= 0 && cfg->pair_types[q] <= 2, "bad pair type");
            out.pair_types.push_back(static_cast<PairType>(cfg->pair_types[q]));
        }
    }
    if (cfg->test_count > 0) {
        out.tests.clear();
        for (int32_t q = 0; q < cfg->test_count; ++q)
            out.tests.push_back(method_to_kind(cfg->tests[q]));
    }
    if (cfg->replicates > 0) out.replicates = cfg->replicates;
    if (cfg->calibration_replicates > 0)
        out.calibration_replicates = cfg->calibration_replicates;
    if (cfg->alpha > 0.0) out.alpha = cfg->alpha;
    out.seed = cfg->seed;
    if (cfg->threads > 0) out.threads = cfg->threads;
    return out;
}

void write_text(const std::string& text, const char* path) {
    std::ofstream f(path);
    if (!f) fail(ErrorCode::Io, std::string("cannot write '") + path + "'");
    f << text;
    if (!f) fail(ErrorCode::Io, std::string("write failed for '") + path + "'");
}

} // namespace

extern "C" {

const char* disct_status_name(disct_status s) {
    switch (s) {
        case DISCT_OK: return "ok";
        case DISCT_EINVAL: return "invalid argument";
        case DISCT_EPARSE: return "parse error";
        case DISCT_ESHAPE: return "shape error";
        case DISCT_EDEGENERATE: return "degenerate data";
        case DISCT_ESINGULAR: return "singular matrix";
        case DISCT_EIO: return "io error";
        case DISCT_EUNKNOWN: return "unknown error";
    }
    return "?";
}

const char* disct_last_error(void) { return g_last_error.c_str(); }

disct_status disct_dataset_load_csv(const char* path, const char* discrete_cols,
                                    disct_dataset** out) {
    return guarded([&] {
        require(path && out, "path/out must not be NULL");
        std::optional<std::vector<std::string>> declared;
        if (discrete_cols) {
            declared.emplace();
            std::string s(discrete_cols);
            std::size_t pos = 0;
            while (pos <= s.size()) {
                const std::size_t c = s.find(',', pos);
                const std::string item = s.substr(pos, c == std::string::npos ? c : c - pos);
                if (!item.empty()) declared->push_back(item);
                if (c == std::string::npos) break;
                pos = c + 1;
            }
        }
        *out = new disct_dataset{load_csv(path, declared)};
    });
}

disct_status disct_dataset_create(const double* values, int64_t n, int32_t p,
                                  const int32_t* kinds, const char* const* names,
                                  disct_dataset** out) {
    return guarded([&] {
        require(values && out, "values/out must not be NULL");
        require(n >= 2 && p >= 1, "need n >= 2, p >= 1");
        std::vector<std::vector<double>> cols(static_cast<std::size_t>(p),
                                              std::vector<double>(static_cast<std::size_t>(n)));
        for (int64_t r = 0; r < n; ++r)
            for (int32_t c = 0; c < p; ++c)
                cols[c][static_cast<std::size_t>(r)] = values[r * p + c];
        std::vector<std::string> nm(static_cast<std::size_t>(p));
        for (int32_t c = 0; c < p; ++c)
            nm[c] = names ? std::string(names[c]) : "x" + std::to_string(c + 1);
        std::vector<ColumnKind> kk(static_cast<std::size_t>(p), ColumnKind::Continuous);
        if (kinds) {
            for (int32_t c = 0; c < p; ++c)
                kk[c] = kinds[c] ? ColumnKind::Discretized : ColumnKind::Continuous;
        } else {
            for (int32_t c = 0; c < p; ++c) {
                std::vector<double> sorted(cols[c]);
                std::sort(sorted.begin(), sorted.end());
                sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
                if (sorted.size() <= kDiscreteDistinctMax) kk[c] = ColumnKind::Discretized;
            }
        }
        *out = new disct_dataset{DataMatrix(std::move(cols), std::move(kk), std::move(nm))};
    });
}

void disct_dataset_free(disct_dataset* d) { delete d; }

int64_t disct_dataset_rows(const disct_dataset* d) {
    return d ? static_cast<int64_t>(d->data.rows()) : 0;
}

int32_t disct_dataset_cols(const disct_dataset* d) {
    return d ? static_cast<int32_t>(d->data.cols()) : 0;
}

int32_t disct_dataset_kind(const disct_dataset* d, int32_t col) {
    if (!d || col < 0 || col >= static_cast<int32_t>(d->data.cols())) return -1;
    return d->data.kind(static_cast<std::size_t>(col)) == ColumnKind::Discretized ? 1 : 0;
}

int32_t disct_dataset_column_index(const disct_dataset* d, const char* name) {
    if (!d || !name) return -1;
    const auto& names = d->data.names();
    for (std::size_t j = 0; j < names.size(); ++j)
        if (names[j] == name) return static_cast<int32_t>(j);
    return -1;
}

const char* disct_dataset_column_name(const disct_dataset* d, int32_t col) {
    if (!d || col < 0 || col >= static_cast<int32_t>(d->data.cols())) return nullptr;
    return d->data.name(static_cast<std::size_t>(col)).c_str();
}

disct_status disct_dataset_write_csv(const disct_dataset* d, const char* path) {
    return guarded([&] {
        require(d && path, "dataset/path must not be NULL");
        write_csv(d->data, path);
    });
}

disct_status disct_pair_test(const disct_dataset* d, int32_t a, int32_t b, double alpha,
                             disct_pair_result* out) {
    return guarded([&] {
        require(d && out, "dataset/out must not be NULL");
        require(a >= 0 && b >= 0, "column indices must be nonnegative");
        const PairKind kind = pair_kind(d->data.kind(a), d->data.kind(b));
        const PairInference r =
            independence_test(d->data.column(a), d->data.column(b), kind, alpha);
        out->sigma_hat = r.theta.sigma;
        out->variance = r.variance;
        out->z = r.z;
        out->p_value = r.p_value;
        out->dependent = r.dependent ? 1 : 0;
    });
}

disct_status disct_ci_test(const disct_dataset* d, int32_t i, int32_t j, const int32_t* cond,
                           int32_t cond_len, double alpha, disct_ci_result* out) {
    return guarded([&] {
        require(d && out, "dataset/out must not be NULL");
        require(i >= 0 && j >= 0, "column indices must be nonnegative");
        require(cond_len == 0 || cond, "cond must not be NULL when cond_len > 0");
        const CiResult r = dct_test(d->data, static_cast<std::size_t>(i),
                                    static_cast<std::size_t>(j), cond_vector(cond, cond_len),
                                    alpha);
        out->beta_hat = r.beta_hat;
        out->variance = r.variance;
        out->z = r.z;
        out->p_value = r.p_value;
        out->independent = r.independent ? 1 : 0;
        out->pd_repaired = r.pd_repaired ? 1 : 0;
    });
}

disct_status disct_pvalue(const disct_dataset* d, disct_ci_method method, int32_t i, int32_t j,
                          const int32_t* cond, int32_t cond_len, double alpha, double* p_out) {
    return guarded([&] {
        require(d && p_out, "dataset/out must not be NULL");
        require(i >= 0 && j >= 0, "column indices must be nonnegative");
        const auto cv = cond_vector(cond, cond_len);
        switch (method) {
            case DISCT_TEST_DCT:
                *p_out = dct_test(d->data, i, j, cv, alpha).p_value;
                return;
            case DISCT_TEST_FISHERZ:
            case DISCT_TEST_FISHERZ_NODIS:
                *p_out = fisher_z_pvalue(d->data, i, j, cv);
                return;
            case DISCT_TEST_CHISQ:
                *p_out = chi_square_pvalue(d->data, i, j, cv);
                return;
        }
        fail(ErrorCode::InvalidArgument, "unknown test method");
    });
}

disct_status disct_discover(const disct_dataset* d, disct_ci_method method, double alpha,
                            int32_t mode, int32_t max_depth, int32_t* adjacency,
                            int64_t* failed_tests) {
    return guarded([&] {
        require(d && adjacency, "dataset/adjacency must not be NULL");
        require(mode == 0 || mode == 1, "mode must be 0 (skeleton) or 1 (dag)");
        std::unique_ptr<CiTester> tester;
        switch (method) {
            case DISCT_TEST_DCT: tester = std::make_unique<DctTester>(); break;
            case DISCT_TEST_CHISQ: tester = std::make_unique<ChiSquareTester>(); break;
            default: tester = std::make_unique<FisherZTester>(); break;
        }
        const DiscoverResult res =
            discover(d->data, *tester, alpha, mode == 0 ? GraphMode::Skeleton : GraphMode::Dag,
                     max_depth);
        graph_to_flat(res.graph, adjacency);
        if (failed_tests) *failed_tests = res.failed_tests;
    });
}

disct_status disct_structure_metrics(const int32_t* estimated, const int32_t* truth, int32_t p,
                                     int32_t mode, disct_metrics* out) {
    return guarded([&] {
        require(estimated && truth && out, "arguments must not be NULL");
        require(p >= 1, "p must be positive");
        require(mode == 0 || mode == 1, "mode must be 0 (skeleton) or 1 (dag)");
        const Metrics m = structure_metrics(graph_from_flat(estimated, p),
                                            graph_from_flat(truth, p),
                                            mode == 0 ? GraphMode::Skeleton : GraphMode::Dag);
        out->f1 = m.f1;
        out->precision = m.precision;
        out->recall = m.recall;
        out->shd = m.shd;
    });
}

disct_status disct_gen_scenario(int32_t scenario, int64_t n, int32_t cond_dim, int32_t pair_type,
                                int32_t levels, uint64_t seed, disct_dataset** out) {
    return guarded([&] {
        require(out, "out must not be NULL");
        require(scenario == 0 || scenario == 1, "scenario must be 0 (null) or 1 (alt)");
        require(pair_type >= 0 && pair_type <= 2, "pair_type must be 0, 1 or 2");
        ScenarioData sc = gen_scenario(scenario == 0 ? ScenarioKind::NullCI : ScenarioKind::AltCI,
                                       static_cast<std::size_t>(n), cond_dim,
                                       static_cast<PairType>(pair_type), levels, seed);
        *out = new disct_dataset{std::move(sc.data)};
    });
}

disct_status disct_gen_dag(int32_t p, int32_t edges, int64_t n, int32_t levels, uint64_t seed,
                           disct_dataset** out, int32_t* truth_adj) {
    return guarded([&] {
        require(out, "out must not be NULL");
        require(levels == 0 || levels >= 2, "levels must be 0 (continuous) or >= 2");
        const Graph dag = gen_dag_bp(p, edges, seed);
        SemSpec spec{dag, draw_weights(dag, 0.5, 2.0, seed)};
        DataMatrix data = sample_sem(spec, static_cast<std::size_t>(n), seed);
        if (levels >= 2) {
            std::vector<std::size_t> all;
            for (std::size_t j = 0; j < data.cols(); ++j) all.push_back(j);
            DiscretizeSpec dspec;
            dspec.levels = levels;
            data = discretize(data, all, dspec, seed);
        }
        if (truth_adj) graph_to_flat(dag, truth_adj);
        *out = new disct_dataset{std::move(data)};
    });
}

void disct_sweep_config_init(disct_sweep_config* cfg) {
    if (!cfg) return;
    std::memset(cfg, 0, sizeof(*cfg));
    cfg->replicates = 500;
    cfg->calibration_replicates = 1000;
    cfg->alpha = 0.05;
    cfg->seed = 1;
    cfg->threads = 1;
}

void disct_discovery_config_init(disct_discovery_config* cfg) {
    if (!cfg) return;
    std::memset(cfg, 0, sizeof(*cfg));
    cfg->instances = 5;
    cfg->levels = 2;
    cfg->alpha = 0.05;
    cfg->seed = 1;
    cfg->threads = 1;
}

disct_status disct_run_type1(const disct_sweep_config* cfg, const char* out_path) {
    return guarded([&] {
        require(cfg && out_path, "cfg/out_path must not be NULL");
        write_text(run_type1(sweep_from_c(cfg)), out_path);
    });
}

disct_status disct_run_power(const disct_sweep_config* cfg, const char* out_path) {
    return guarded([&] {
        require(cfg && out_path, "cfg/out_path must not be NULL");
        write_text(run_power(sweep_from_c(cfg)), out_path);
    });
}

disct_status disct_run_discovery(const disct_discovery_config* cfg, const char* out_path) {
    return guarded([&] {
        require(cfg && out_path, "cfg/out_path must not be NULL");
        DiscoveryConfig d;
        if (cfg->p_count > 0) d.p_grid.assign(cfg->p_grid, cfg->p_grid + cfg->p_count);
        if (cfg->n_count > 0) {
            d.n_grid.clear();
            for (int32_t q = 0; q < cfg->n_count; ++q)
                d.n_grid.push_back(static_cast<std::size_t>(cfg->n_grid[q]));
        }
        if (cfg->edge_count > 0)
            d.edge_grid.assign(cfg->edge_grid, cfg->edge_grid + cfg->edge_count);
        if (cfg->test_count > 0) {
            d.tests.clear();
            for (int32_t q = 0; q < cfg->test_count; ++q)
                d.tests.push_back(method_to_kind(cfg->tests[q]));
        }
        if (cfg->instances > 0) d.instances = cfg->instances;
        if (cfg->levels >= 2) d.levels = cfg->levels;
        if (cfg->alpha > 0.0) d.alpha = cfg->alpha;
        d.seed = cfg->seed;
        if (cfg->threads > 0) d.threads = cfg->threads;
        write_text(run_discovery(d), out_path);
    });
}

} // extern "C"
