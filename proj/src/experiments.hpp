#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "synth.hpp"

namespace disct {

enum class TestKind { Dct, FisherZ, ChiSq, FisherZNoDis };

const char* test_kind_name(TestKind t);
const char* pair_type_name(PairType t);

// One synthetic-null geometry; also the calibration target for power runs.
struct NullDesign {
    std::size_t n = 2000;
    int cond_dim = 1;
    PairType pair_type = PairType::Continuous;
    int levels = 4;
};

struct SweepConfig {
    std::vector<std::size_t> n_grid{2000};
    std::vector<int> d_grid{1};
    std::vector<int> k_grid{4};
    std::vector<PairType> pair_types{PairType::Continuous, PairType::Mixed, PairType::Discrete};
    std::vector<TestKind> tests{TestKind::Dct, TestKind::FisherZ};
    int replicates = 500;
    int calibration_replicates = 1000;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Null rejection rates per (test, pair type, n, D, K) cell. Replicate
// data is shared across tests within a cell; the CSV is byte-stable for
// a fixed config regardless of thread count.
std::string run_type1(const SweepConfig& cfg);

// Calibrated type-II rates: the per-cell threshold is the empirical
// alpha-quantile of calibration_replicates null p-values, then the
// alternative scenario is rejected against that threshold.
std::string run_power(const SweepConfig& cfg);

// Empirical alpha-quantile of the null p-value distribution for one test
// and one geometry.
double calibrate_threshold(TestKind test, const NullDesign& design, int replicates, double alpha,
                           std::uint64_t seed, int threads);

struct DiscoveryConfig {
    std::vector<int> p_grid{8};
    std::vector<std::size_t> n_grid{10000};
    std::vector<int> edge_grid{7};
    std::vector<TestKind> tests{TestKind::Dct, TestKind::FisherZ, TestKind::ChiSq,
                                TestKind::FisherZNoDis};
    int instances = 5;
    int levels = 2;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    int threads = 1;
    double weight_lo = 0.5;
    double weight_hi = 2.0;
};

// PC on discretized SEM draws; FisherZNoDis runs on the pre-discretization
// columns as the no-discretization reference arm.
std::string run_discovery(const DiscoveryConfig& cfg);

// p-value of one test on scenario data laid out as [y, w, z...].
double scenario_pvalue(TestKind test, const ScenarioData& sc, double alpha);

} // namespace disct
