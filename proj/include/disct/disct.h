/* disct: conditional-independence testing for latent Gaussian variables
 * observed through unknown monotone discretization.
 *
 * Every function returns a disct_status; on failure the out-params are
 * untouched and disct_last_error() carries a thread-local message.
 */
#ifndef DISCT_H
#define DISCT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum disct_status {
    DISCT_OK = 0,
    DISCT_EINVAL = 1,
    DISCT_EPARSE = 2,
    DISCT_ESHAPE = 3,
    DISCT_EDEGENERATE = 4,
    DISCT_ESINGULAR = 5,
    DISCT_EIO = 6,
    DISCT_EUNKNOWN = 7
} disct_status;

const char* disct_status_name(disct_status s);
const char* disct_last_error(void);

/* ---- datasets ------------------------------------------------------- */

typedef struct disct_dataset disct_dataset;

/* discrete_cols: comma-separated column names forced to discretized, or
 * NULL to infer kinds from the distinct-value count. */
disct_status disct_dataset_load_csv(const char* path, const char* discrete_cols,
                                    disct_dataset** out);

/* values: row-major n x p. kinds: 0 continuous / 1 discretized per column,
 * or NULL to infer. names: p strings, or NULL for x1..xp. */
disct_status disct_dataset_create(const double* values, int64_t n, int32_t p,
                                  const int32_t* kinds, const char* const* names,
                                  disct_dataset** out);

void disct_dataset_free(disct_dataset* d);

int64_t disct_dataset_rows(const disct_dataset* d);
int32_t disct_dataset_cols(const disct_dataset* d);
/* 0 continuous, 1 discretized, -1 bad index */
int32_t disct_dataset_kind(const disct_dataset* d, int32_t col);
/* -1 when the name is absent */
int32_t disct_dataset_column_index(const disct_dataset* d, const char* name);
/* NULL on bad index; pointer lives as long as the dataset */
const char* disct_dataset_column_name(const disct_dataset* d, int32_t col);

disct_status disct_dataset_write_csv(const disct_dataset* d, const char* path);

/* ---- tests ---------------------------------------------------------- */

typedef struct disct_pair_result {
    double sigma_hat;
    double variance;
    double z;
    double p_value;
    int32_t dependent;
} disct_pair_result;

disct_status disct_pair_test(const disct_dataset* d, int32_t a, int32_t b, double alpha,
                             disct_pair_result* out);

typedef struct disct_ci_result {
    double beta_hat;
    double variance;
    double z;
    double p_value;
    int32_t independent;
    int32_t pd_repaired;
} disct_ci_result;

disct_status disct_ci_test(const disct_dataset* d, int32_t i, int32_t j, const int32_t* cond,
                           int32_t cond_len, double alpha, disct_ci_result* out);

typedef enum disct_ci_method {
    DISCT_TEST_DCT = 0,
    DISCT_TEST_FISHERZ = 1,
    DISCT_TEST_CHISQ = 2,
    DISCT_TEST_FISHERZ_NODIS = 3
} disct_ci_method;

disct_status disct_pvalue(const disct_dataset* d, disct_ci_method method, int32_t i, int32_t j,
                          const int32_t* cond, int32_t cond_len, double alpha, double* p_out);

/* ---- causal discovery ------------------------------------------------ */

/* mode: 0 skeleton, 1 dag. adjacency: caller buffer of p*p int32, row
 * major; entry (i,j) = 1 encodes i->j, symmetric 1s an undirected edge. */
disct_status disct_discover(const disct_dataset* d, disct_ci_method method, double alpha,
                            int32_t mode, int32_t max_depth, int32_t* adjacency,
                            int64_t* failed_tests);

typedef struct disct_metrics {
    double f1;
    double precision;
    double recall;
    int64_t shd;
} disct_metrics;

disct_status disct_structure_metrics(const int32_t* estimated, const int32_t* truth, int32_t p,
                                     int32_t mode, disct_metrics* out);

/* ---- synthetic data --------------------------------------------------- */

/* scenario: 0 null (independent given conditioners), 1 alt.
 * pair_type: 0 continuous, 1 mixed, 2 discrete. Columns: y, w, z1..zD. */
disct_status disct_gen_scenario(int32_t scenario, int64_t n, int32_t cond_dim, int32_t pair_type,
                                int32_t levels, uint64_t seed, disct_dataset** out);

/* Random-DAG SEM draw; levels >= 2 discretizes every column, levels == 0
 * keeps them continuous. truth_adj: optional p*p row-major buffer. */
disct_status disct_gen_dag(int32_t p, int32_t edges, int64_t n, int32_t levels, uint64_t seed,
                           disct_dataset** out, int32_t* truth_adj);

/* ---- experiment sweeps ------------------------------------------------ */

/* Grids may be NULL (count 0) to take the defaults. tests entries use
 * disct_ci_method values. */
typedef struct disct_sweep_config {
    const int64_t* n_grid;
    int32_t n_count;
    const int32_t* d_grid;
    int32_t d_count;
    const int32_t* k_grid;
    int32_t k_count;
    const int32_t* pair_types;
    int32_t pair_type_count;
    const int32_t* tests;
    int32_t test_count;
    int32_t replicates;
    int32_t calibration_replicates;
    double alpha;
    uint64_t seed;
    int32_t threads;
} disct_sweep_config;

void disct_sweep_config_init(disct_sweep_config* cfg);

disct_status disct_run_type1(const disct_sweep_config* cfg, const char* out_path);
disct_status disct_run_power(const disct_sweep_config* cfg, const char* out_path);

typedef struct disct_discovery_config {
    const int32_t* p_grid;
    int32_t p_count;
    const int64_t* n_grid;
    int32_t n_count;
    const int32_t* edge_grid;
    int32_t edge_count;
    const int32_t* tests;
    int32_t test_count;
    int32_t instances;
    int32_t levels;
    double alpha;
    uint64_t seed;
    int32_t threads;
} disct_discovery_config;

void disct_discovery_config_init(disct_discovery_config* cfg);

disct_status disct_run_discovery(const disct_discovery_config* cfg, const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* DISCT_H */
