#include "experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>

#include "ci_test.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "parallel.hpp"
#include "pc.hpp"
#include "rng.hpp"

namespace disct {

namespace {

constexpr std::uint64_t kTagType1 = 0x74797065310000ull;
constexpr std::uint64_t kTagCal = 0x63616c0000000000ull;
constexpr std::uint64_t kTagAlt = 0x616c740000000000ull;
constexpr std::uint64_t kTagInst = 0x696e737400000000ull;

std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool applicable(TestKind test, PairType pt) {
    return test != TestKind::ChiSq || pt == PairType::Discrete;
}

struct CellGeom {
    PairType pt;
    std::size_t n;
    int d;
    int k;
};

std::vector<CellGeom> make_cells(const SweepConfig& cfg) {
    std::vector<CellGeom> cells;
    for (PairType pt : cfg.pair_types)
        for (std::size_t n : cfg.n_grid)
            for (int d : cfg.d_grid)
                for (int k : cfg.k_grid) cells.push_back({pt, n, d, k});
    return cells;
}

std::uint64_t cell_stream(std::uint64_t salt, const CellGeom& c, int rep) {
    return derive_stream({salt, c.n, static_cast<std::uint64_t>(c.d),
                          static_cast<std::uint64_t>(c.k), static_cast<std::uint64_t>(c.pt),
                          static_cast<std::uint64_t>(rep)});
}

// p-values for every configured test on one replicate; nullopt = failure
using RepRow = std::vector<std::optional<double>>;

RepRow replicate_pvalues(const SweepConfig& cfg, ScenarioKind kind, const CellGeom& cell,
                         std::uint64_t rep_seed) {
    RepRow row(cfg.tests.size());
    std::optional<ScenarioData> sc;
    try {
        sc.emplace(gen_scenario(kind, cell.n, cell.d, cell.pt, cell.k, rep_seed));
    } catch (const DisctError&) {
        return row;  // whole replicate failed to generate
    }
    for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
        if (!applicable(cfg.tests[t], cell.pt)) continue;
        try {
            row[t] = scenario_pvalue(cfg.tests[t], *sc, cfg.alpha);
        } catch (const DisctError&) {
            // leave failed
        }
    }
    return row;
}

struct RateSummary {
    double rate = 0.0;
    double stderr_ = 0.0;
    long failures = 0;
};

RateSummary summarize(const std::vector<RepRow>& rows, std::size_t test_idx, double cut) {
    long succ = 0, rej = 0, fails = 0;
    for (const auto& row : rows) {
        if (!row[test_idx]) {
            ++fails;
            continue;
        }
        ++succ;
        if (*row[test_idx] <= cut) ++rej;
    }
    RateSummary s;
    s.failures = fails;
    if (succ > 0) {
        s.rate = static_cast<double>(rej) / static_cast<double>(succ);
        s.stderr_ = std::sqrt(s.rate * (1.0 - s.rate) / static_cast<double>(succ));
    }
    return s;
}

double empirical_quantile_threshold(std::vector<double> pvals, double alpha) {
    if (pvals.empty()) fail(ErrorCode::DegenerateColumn, "calibration produced no p-values");
    std::sort(pvals.begin(), pvals.end());
    const auto m = static_cast<double>(pvals.size());
    std::size_t k = static_cast<std::size_t>(std::floor(alpha * m));
    if (k < 1) k = 1;
    if (k > pvals.size()) k = pvals.size();
    return pvals[k - 1];
}

} // namespace

const char* test_kind_name(TestKind t) {
    switch (t) {
        case TestKind::Dct: return "dct";
        case TestKind::FisherZ: return "fisherz";
        case TestKind::ChiSq: return "chisq";
        case TestKind::FisherZNoDis: return "fisherz_nodis";
    }
    return "?";
}

const char* pair_type_name(PairType t) {
    switch (t) {
        case PairType::Continuous: return "continuous";
        case PairType::Mixed: return "mixed";
        case PairType::Discrete: return "discrete";
    }
    return "?";
}

double scenario_pvalue(TestKind test, const ScenarioData& sc, double alpha) {
    std::vector<std::size_t> cond;
    for (std::size_t c = 2; c < sc.data.cols(); ++c) cond.push_back(c);
    switch (test) {
        case TestKind::Dct: return dct_test(sc.data, 0, 1, cond, alpha).p_value;
        case TestKind::FisherZ: return fisher_z_pvalue(sc.data, 0, 1, cond);
        case TestKind::ChiSq: return chi_square_pvalue(sc.data, 0, 1, cond);
        case TestKind::FisherZNoDis: return fisher_z_pvalue(sc.raw, 0, 1, cond);
    }
    fail(ErrorCode::InvalidArgument, "unknown test kind");
}

std::string run_type1(const SweepConfig& cfg) {
    const std::vector<CellGeom> cells = make_cells(cfg);
    const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
    std::vector<std::vector<RepRow>> results(cells.size(), std::vector<RepRow>(reps));

    parallel_for(cells.size() * reps, cfg.threads, [&](std::size_t task) {
        const std::size_t c = task / reps;
        const int r = static_cast<int>(task % reps);
        results[c][r] = replicate_pvalues(cfg, ScenarioKind::NullCI, cells[c],
                                          derive_stream({cfg.seed, kTagType1,
                                                         cell_stream(kTagType1, cells[c], r)}));
    });

    std::ostringstream out;
    out << "test,pair_type,n,D,K,rejection_rate,mc_stderr,failures\n";
    for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!applicable(cfg.tests[t], cells[c].pt)) continue;
            const RateSummary s = summarize(results[c], t, cfg.alpha);
            out << test_kind_name(cfg.tests[t]) << ',' << pair_type_name(cells[c].pt) << ','
                << cells[c].n << ',' << cells[c].d << ',' << cells[c].k << ',' << fmt(s.rate)
                << ',' << fmt(s.stderr_) << ',' << s.failures << "\n";
        }
    }
    return out.str();
}

namespace {

std::vector<RepRow> null_pvalue_rows(const SweepConfig& cfg, const CellGeom& cell,
                                     int replicates, std::uint64_t salt) {
    const std::size_t reps = static_cast<std::size_t>(replicates);
    std::vector<RepRow> rows(reps);
    parallel_for(reps, cfg.threads, [&](std::size_t r) {
        rows[r] = replicate_pvalues(cfg, ScenarioKind::NullCI, cell,
                                    derive_stream({cfg.seed, salt,
                                                   cell_stream(salt, cell, static_cast<int>(r))}));
    });
    return rows;
}

} // namespace

double calibrate_threshold(TestKind test, const NullDesign& design, int replicates, double alpha,
                           std::uint64_t seed, int threads) {
    SweepConfig cfg;
    cfg.tests = {test};
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.threads = threads;
    const CellGeom cell{design.pair_type, design.n, design.cond_dim, design.levels};
    if (!applicable(test, design.pair_type))
        fail(ErrorCode::InvalidArgument, "test not applicable to this pair type");
    const auto rows = null_pvalue_rows(cfg, cell, replicates, kTagCal);
    std::vector<double> pvals;
    pvals.reserve(rows.size());
    for (const auto& row : rows)
        if (row[0]) pvals.push_back(*row[0]);
    return empirical_quantile_threshold(std::move(pvals), alpha);
}

std::string run_power(const SweepConfig& cfg) {
    const std::vector<CellGeom> cells = make_cells(cfg);
    const std::size_t reps = static_cast<std::size_t>(cfg.replicates);

    std::ostringstream out;
    out << "test,pair_type,n,D,K,calibrated_type2_rate,failures\n";

    // calibration + alternative replicates, cell by cell; replicate data is
    // shared across tests, thresholds are per test
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto cal_rows = null_pvalue_rows(cfg, cells[c], cfg.calibration_replicates, kTagCal);

        std::vector<RepRow> alt_rows(reps);
        parallel_for(reps, cfg.threads, [&](std::size_t r) {
            alt_rows[r] = replicate_pvalues(cfg, ScenarioKind::AltCI, cells[c],
                                            derive_stream({cfg.seed, kTagAlt,
                                                           cell_stream(kTagAlt, cells[c],
                                                                       static_cast<int>(r))}));
        });

        for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
            if (!applicable(cfg.tests[t], cells[c].pt)) continue;
            std::vector<double> pvals;
            for (const auto& row : cal_rows)
                if (row[t]) pvals.push_back(*row[t]);
            const double thr = empirical_quantile_threshold(std::move(pvals), cfg.alpha);
            const RateSummary s = summarize(alt_rows, t, thr);
            out << test_kind_name(cfg.tests[t]) << ',' << pair_type_name(cells[c].pt) << ','
                << cells[c].n << ',' << cells[c].d << ',' << cells[c].k << ','
                << fmt(1.0 - s.rate) << ',' << s.failures << "\n";
        }
    }
    return out.str();
}

namespace {

struct DiscoveryRow {
    Metrics skeleton;
    Metrics dag;
};

struct InstanceRows {
    std::vector<std::optional<DiscoveryRow>> per_test;
};

std::unique_ptr<CiTester> make_tester(TestKind test) {
    switch (test) {
        case TestKind::Dct: return std::make_unique<DctTester>();
        case TestKind::ChiSq: return std::make_unique<ChiSquareTester>();
        default: return std::make_unique<FisherZTester>();
    }
}

} // namespace

std::string run_discovery(const DiscoveryConfig& cfg) {
    struct Cell {
        int p;
        std::size_t n;
        int edges;
    };
    std::vector<Cell> cells;
    for (int p : cfg.p_grid)
        for (std::size_t n : cfg.n_grid)
            for (int e : cfg.edge_grid) cells.push_back({p, n, e});

    const std::size_t insts = static_cast<std::size_t>(cfg.instances);
    std::vector<std::vector<InstanceRows>> results(cells.size(),
                                                   std::vector<InstanceRows>(insts));

    parallel_for(cells.size() * insts, cfg.threads, [&](std::size_t task) {
        const std::size_t c = task / insts;
        const int inst = static_cast<int>(task % insts);
        const Cell& cell = cells[c];
        const std::uint64_t inst_seed =
            derive_stream({cfg.seed, kTagInst, static_cast<std::uint64_t>(cell.p), cell.n,
                           static_cast<std::uint64_t>(cell.edges),
                           static_cast<std::uint64_t>(inst)});

        const Graph truth = gen_dag_bp(cell.p, cell.edges, inst_seed);
        SemSpec spec{truth, draw_weights(truth, cfg.weight_lo, cfg.weight_hi, inst_seed)};
        const DataMatrix cont = sample_sem(spec, cell.n, inst_seed);
        std::vector<std::size_t> all;
        for (std::size_t j = 0; j < cont.cols(); ++j) all.push_back(j);
        DiscretizeSpec dspec;
        dspec.levels = cfg.levels;
        const DataMatrix disc = discretize(cont, all, dspec, inst_seed);

        InstanceRows& rows = results[c][inst];
        rows.per_test.resize(cfg.tests.size());
        for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
            const TestKind test = cfg.tests[t];
            const DataMatrix& used = (test == TestKind::FisherZNoDis) ? cont : disc;
            try {
                auto tester = make_tester(test);
                const SkeletonResult sk = pc_skeleton(used, *tester, cfg.alpha);
                DiscoveryRow row;
                row.skeleton = structure_metrics(sk.graph, truth, GraphMode::Skeleton);
                const OrientResult dag = extend_to_dag(orient_colliders_meek(sk.graph, sk.sepsets));
                row.dag = structure_metrics(dag.graph, truth, GraphMode::Dag);
                rows.per_test[t] = row;
            } catch (const DisctError&) {
                // leave the slot empty; emitted as a failed row
            }
        }
    });

    std::ostringstream out;
    out << "test,p,n,edges,mode,f1,precision,recall,shd,seed\n";
    const auto emit = [&](TestKind test, const Cell& cell, const char* mode, const Metrics& m,
                          int inst) {
        out << test_kind_name(test) << ',' << cell.p << ',' << cell.n << ',' << cell.edges << ','
            << mode << ',' << fmt(m.f1) << ',' << fmt(m.precision) << ',' << fmt(m.recall) << ','
            << m.shd << ',' << inst << "\n";
    };
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (std::size_t inst = 0; inst < insts; ++inst) {
            const InstanceRows& rows = results[c][inst];
            for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
                if (!rows.per_test[t]) continue;
                emit(cfg.tests[t], cells[c], "skeleton", rows.per_test[t]->skeleton,
                     static_cast<int>(inst));
                emit(cfg.tests[t], cells[c], "dag", rows.per_test[t]->dag,
                     static_cast<int>(inst));
            }
        }
    }
    return out.str();
}

} // namespace disct
