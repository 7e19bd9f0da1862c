// disct command line: pairwise and conditional independence tests, PC
// discovery, synthetic data generation, and the simulation sweeps.
// Talks to the library strictly through the public C interface.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "disct/disct.h"

namespace {

[[noreturn]] void die(disct_status s) {
    std::cerr << "error: " << disct_last_error() << " (" << disct_status_name(s) << ")\n";
    std::exit(1);
}

void check(disct_status s) {
    if (s != DISCT_OK) die(s);
}

struct DatasetGuard {
    disct_dataset* ds = nullptr;
    ~DatasetGuard() { disct_dataset_free(ds); }
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int32_t column_of(const disct_dataset* ds, const std::string& ref) {
    int32_t idx = disct_dataset_column_index(ds, ref.c_str());
    if (idx >= 0) return idx;
    try {
        std::size_t used = 0;
        const int v = std::stoi(ref, &used);
        if (used == ref.size() && v >= 0 && v < disct_dataset_cols(ds)) return v;
    } catch (...) {
    }
    std::cerr << "error: no column '" << ref << "' in the data\n";
    std::exit(1);
}

DatasetGuard load_data(const std::string& path, const std::string& discrete_cols,
                       bool infer_kinds) {
    DatasetGuard g;
    const char* declared = nullptr;
    if (!infer_kinds && !discrete_cols.empty()) declared = discrete_cols.c_str();
    check(disct_dataset_load_csv(path.c_str(), declared, &g.ds));
    return g;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        std::exit(1);
    }
    f << text;
}

std::string fmtd(double v) {
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
}

int32_t method_of(const std::string& name) {
    if (name == "dct") return DISCT_TEST_DCT;
    if (name == "fisherz") return DISCT_TEST_FISHERZ;
    if (name == "chisq") return DISCT_TEST_CHISQ;
    if (name == "fisherz_nodis") return DISCT_TEST_FISHERZ_NODIS;
    std::cerr << "error: unknown test '" << name << "'\n";
    std::exit(1);
}

std::string adjacency_csv(const std::vector<int32_t>& adj, int32_t p) {
    std::ostringstream o;
    for (int32_t i = 0; i < p; ++i) {
        for (int32_t j = 0; j < p; ++j) o << (j ? "," : "") << adj[i * p + j];
        o << "\n";
    }
    return o.str();
}

std::vector<int32_t> truth_from_edge_list(const std::string& path, const disct_dataset* ds) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open '" << path << "'\n";
        std::exit(1);
    }
    const int32_t p = disct_dataset_cols(ds);
    std::vector<int32_t> adj(static_cast<std::size_t>(p) * p, 0);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {  // header "from,to"
            first = false;
            continue;
        }
        const auto cells = split_list(line);
        if (cells.size() != 2) {
            std::cerr << "error: bad edge row '" << line << "' (want from,to)\n";
            std::exit(1);
        }
        const int32_t a = column_of(ds, cells[0]);
        const int32_t b = column_of(ds, cells[1]);
        adj[a * p + b] = 1;
    }
    return adj;
}

std::string edge_list_csv(const std::vector<int32_t>& adj, const disct_dataset* ds) {
    const int32_t p = disct_dataset_cols(ds);
    std::ostringstream o;
    o << "from,to\n";
    for (int32_t i = 0; i < p; ++i)
        for (int32_t j = 0; j < p; ++j)
            if (adj[i * p + j] && !adj[j * p + i])
                o << disct_dataset_column_name(ds, i) << ',' << disct_dataset_column_name(ds, j)
                  << "\n";
    return o.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conditional independence testing under unknown monotone discretization"};
    app.require_subcommand(1);

    // shared data flags
    std::string data_path, discrete_cols, out_path;
    bool infer_kinds = false;
    double alpha = 0.05;
    const auto add_data_flags = [&](CLI::App* cmd) {
        cmd->add_option("--data", data_path, "input CSV with a header row")->required();
        cmd->add_option("--discrete-cols", discrete_cols,
                        "comma-separated names of discretized columns");
        cmd->add_flag("--infer-kinds", infer_kinds,
                      "infer column kinds from distinct-value counts");
    };

    // --- test ---
    auto* c_test = app.add_subcommand("test", "pairwise independence test");
    std::string pair_arg;
    add_data_flags(c_test);
    c_test->add_option("--pair", pair_arg, "two column names, comma separated")->required();
    c_test->add_option("--alpha", alpha, "significance level");
    c_test->add_option("--out", out_path, "output CSV path (default stdout)");

    // --- citest ---
    auto* c_ci = app.add_subcommand("citest", "conditional independence test");
    std::string arg_i, arg_j, cond_arg;
    add_data_flags(c_ci);
    c_ci->add_option("--i", arg_i, "first tested column")->required();
    c_ci->add_option("--j", arg_j, "second tested column")->required();
    c_ci->add_option("--cond", cond_arg, "conditioning columns, comma separated");
    c_ci->add_option("--alpha", alpha, "significance level");
    c_ci->add_option("--out", out_path, "output CSV path (default stdout)");

    // --- discover ---
    auto* c_disc = app.add_subcommand("discover", "PC structure search");
    std::string test_name = "dct", mode_name = "skeleton", truth_path, metrics_path;
    int32_t max_depth = -1;
    add_data_flags(c_disc);
    c_disc->add_option("--test", test_name, "dct, fisherz or chisq");
    c_disc->add_option("--alpha", alpha, "significance level");
    c_disc->add_option("--mode", mode_name, "skeleton or dag")
        ->check(CLI::IsMember({"skeleton", "dag"}));
    c_disc->add_option("--max-depth", max_depth, "cap on conditioning set size");
    c_disc->add_option("--truth", truth_path, "true graph as from,to edge-list CSV");
    c_disc->add_option("--out", out_path, "adjacency matrix CSV path (default stdout)");
    c_disc->add_option("--metrics-out", metrics_path, "metrics CSV path (default stdout)");

    // --- gen ---
    auto* c_gen = app.add_subcommand("gen", "synthetic data generation");
    std::string scenario = "null", pair_type_name = "continuous", truth_out;
    int64_t gen_n = 1000;
    int32_t gen_p = 8, gen_edges = 7, levels = 4, cond_dim = 1;
    std::uint64_t seed = 1;
    c_gen->add_option("--scenario", scenario, "null, alt or dag")
        ->check(CLI::IsMember({"null", "alt", "dag"}));
    c_gen->add_option("--n", gen_n, "sample size");
    c_gen->add_option("--p", gen_p, "node count (dag scenario)");
    c_gen->add_option("--edges", gen_edges, "edge count (dag scenario)");
    c_gen->add_option("--cond-dim", cond_dim, "conditioning dimension (null/alt)");
    c_gen->add_option("--pair-type", pair_type_name, "continuous, mixed or discrete (null/alt)")
        ->check(CLI::IsMember({"continuous", "mixed", "discrete"}));
    c_gen->add_option("--levels", levels, "discretization levels (0 keeps dag data continuous)");
    c_gen->add_option("--seed", seed, "random seed");
    c_gen->add_option("--out", out_path, "data CSV path")->required();
    c_gen->add_option("--truth-out", truth_out, "edge-list CSV for the generating DAG");

    // --- sweeps ---
    std::vector<int64_t> n_grid;
    std::vector<int32_t> d_grid, k_grid, edge_grid, p_grid;
    std::vector<std::string> test_names, pair_type_names;
    int32_t replicates = 0, calibration = 0, instances = 0, threads = 1;

    const auto add_sweep_flags = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "results CSV path")->required();
        cmd->add_option("--seed", seed, "base seed");
        cmd->add_option("--alpha", alpha, "significance level");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--tests", test_names, "tests to run");
    };

    auto* c_t1 = app.add_subcommand("type1", "null rejection-rate sweep");
    add_sweep_flags(c_t1);
    c_t1->add_option("--replicates", replicates, "replicates per cell");
    c_t1->add_option("--n-grid", n_grid, "sample sizes");
    c_t1->add_option("--d-grid", d_grid, "conditioning dimensions");
    c_t1->add_option("--k-grid", k_grid, "discretization levels");
    c_t1->add_option("--pair-types", pair_type_names, "pair types");

    auto* c_pw = app.add_subcommand("power", "calibrated type-II sweep");
    add_sweep_flags(c_pw);
    c_pw->add_option("--replicates", replicates, "alternative replicates per cell");
    c_pw->add_option("--calibration-replicates", calibration, "null replicates per threshold");
    c_pw->add_option("--n-grid", n_grid, "sample sizes");
    c_pw->add_option("--d-grid", d_grid, "conditioning dimensions");
    c_pw->add_option("--k-grid", k_grid, "discretization levels");
    c_pw->add_option("--pair-types", pair_type_names, "pair types");

    auto* c_ds = app.add_subcommand("discover-sweep", "graph recovery sweep");
    add_sweep_flags(c_ds);
    c_ds->add_option("--replicates", instances, "instances per cell");
    c_ds->add_option("--p-grid", p_grid, "node counts");
    c_ds->add_option("--n-grid", n_grid, "sample sizes");
    c_ds->add_option("--edge-grid", edge_grid, "edge counts");
    auto* opt_ds_levels = c_ds->add_option("--levels", levels, "discretization levels");

    CLI11_PARSE(app, argc, argv);

    if (c_test->parsed()) {
        const auto names = split_list(pair_arg);
        if (names.size() != 2) {
            std::cerr << "error: --pair wants exactly two columns\n";
            return 1;
        }
        DatasetGuard g = load_data(data_path, discrete_cols, infer_kinds);
        disct_pair_result r;
        check(disct_pair_test(g.ds, column_of(g.ds, names[0]), column_of(g.ds, names[1]), alpha,
                              &r));
        emit("sigma_hat,variance,z,p_value\n" + fmtd(r.sigma_hat) + "," + fmtd(r.variance) +
                 "," + fmtd(r.z) + "," + fmtd(r.p_value) + "\n",
             out_path);
        return 0;
    }

    if (c_ci->parsed()) {
        DatasetGuard g = load_data(data_path, discrete_cols, infer_kinds);
        std::vector<int32_t> cond;
        for (const auto& ref : split_list(cond_arg)) cond.push_back(column_of(g.ds, ref));
        disct_ci_result r;
        check(disct_ci_test(g.ds, column_of(g.ds, arg_i), column_of(g.ds, arg_j),
                            cond.empty() ? nullptr : cond.data(),
                            static_cast<int32_t>(cond.size()), alpha, &r));
        emit("beta_hat,variance,z,p_value,decision,pd_repair_flag\n" + fmtd(r.beta_hat) + "," +
                 fmtd(r.variance) + "," + fmtd(r.z) + "," + fmtd(r.p_value) + "," +
                 (r.independent ? "independent" : "dependent") + "," +
                 std::to_string(r.pd_repaired) + "\n",
             out_path);
        return 0;
    }

    if (c_disc->parsed()) {
        DatasetGuard g = load_data(data_path, discrete_cols, infer_kinds);
        const int32_t p = disct_dataset_cols(g.ds);
        std::vector<int32_t> adj(static_cast<std::size_t>(p) * p, 0);
        const int32_t mode = (mode_name == "dag") ? 1 : 0;
        check(disct_discover(g.ds, static_cast<disct_ci_method>(method_of(test_name)), alpha,
                             mode, max_depth, adj.data(), nullptr));
        emit(adjacency_csv(adj, p), out_path);
        if (!truth_path.empty()) {
            const std::vector<int32_t> truth = truth_from_edge_list(truth_path, g.ds);
            disct_metrics m;
            check(disct_structure_metrics(adj.data(), truth.data(), p, mode, &m));
            emit("mode,f1,precision,recall,shd\n" + mode_name + "," + fmtd(m.f1) + "," +
                     fmtd(m.precision) + "," + fmtd(m.recall) + "," + std::to_string(m.shd) +
                     "\n",
                 metrics_path);
        }
        return 0;
    }

    if (c_gen->parsed()) {
        DatasetGuard g;
        std::vector<int32_t> truth;
        if (scenario == "dag") {
            truth.assign(static_cast<std::size_t>(gen_p) * gen_p, 0);
            check(disct_gen_dag(gen_p, gen_edges, gen_n, levels, seed, &g.ds, truth.data()));
        } else {
            int32_t pt = pair_type_name == "mixed" ? 1 : (pair_type_name == "discrete" ? 2 : 0);
            check(disct_gen_scenario(scenario == "null" ? 0 : 1, gen_n, cond_dim, pt, levels,
                                     seed, &g.ds));
        }
        check(disct_dataset_write_csv(g.ds, out_path.c_str()));
        if (!truth_out.empty()) {
            if (truth.empty()) {
                std::cerr << "error: --truth-out only applies to --scenario dag\n";
                return 1;
            }
            emit(edge_list_csv(truth, g.ds), truth_out);
        }
        return 0;
    }

    // sweeps
    std::vector<int32_t> methods;
    for (const auto& t : test_names) methods.push_back(method_of(t));
    std::vector<int32_t> pair_types;
    for (const auto& s : pair_type_names) {
        if (s == "continuous") pair_types.push_back(0);
        else if (s == "mixed") pair_types.push_back(1);
        else if (s == "discrete") pair_types.push_back(2);
        else {
            std::cerr << "error: unknown pair type '" << s << "'\n";
            return 1;
        }
    }

    if (c_t1->parsed() || c_pw->parsed()) {
        disct_sweep_config cfg;
        disct_sweep_config_init(&cfg);
        cfg.n_grid = n_grid.empty() ? nullptr : n_grid.data();
        cfg.n_count = static_cast<int32_t>(n_grid.size());
        cfg.d_grid = d_grid.empty() ? nullptr : d_grid.data();
        cfg.d_count = static_cast<int32_t>(d_grid.size());
        cfg.k_grid = k_grid.empty() ? nullptr : k_grid.data();
        cfg.k_count = static_cast<int32_t>(k_grid.size());
        cfg.pair_types = pair_types.empty() ? nullptr : pair_types.data();
        cfg.pair_type_count = static_cast<int32_t>(pair_types.size());
        cfg.tests = methods.empty() ? nullptr : methods.data();
        cfg.test_count = static_cast<int32_t>(methods.size());
        if (replicates > 0) cfg.replicates = replicates;
        if (calibration > 0) cfg.calibration_replicates = calibration;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.threads = threads;
        check(c_t1->parsed() ? disct_run_type1(&cfg, out_path.c_str())
                             : disct_run_power(&cfg, out_path.c_str()));
        return 0;
    }

    if (c_ds->parsed()) {
        disct_discovery_config cfg;
        disct_discovery_config_init(&cfg);
        cfg.p_grid = p_grid.empty() ? nullptr : p_grid.data();
        cfg.p_count = static_cast<int32_t>(p_grid.size());
        cfg.n_grid = n_grid.empty() ? nullptr : n_grid.data();
        cfg.n_count = static_cast<int32_t>(n_grid.size());
        cfg.edge_grid = edge_grid.empty() ? nullptr : edge_grid.data();
        cfg.edge_count = static_cast<int32_t>(edge_grid.size());
        cfg.tests = methods.empty() ? nullptr : methods.data();
        cfg.test_count = static_cast<int32_t>(methods.size());
        if (instances > 0) cfg.instances = instances;
        if (opt_ds_levels->count() > 0) cfg.levels = levels;
        cfg.alpha = alpha;
        cfg.seed = seed;
        cfg.threads = threads;
        check(disct_run_discovery(&cfg, out_path.c_str()));
        return 0;
    }

    return 0;
}
