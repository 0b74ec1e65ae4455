/* C API for the tactsim base-station sleep-scheduling simulator.
 *
 * All functions return tactsim_status; TACTSIM_OK is 0. On failure a
 * human-readable message is available from tactsim_last_error() (thread
 * local). Handles are opaque and must be released with the matching _free
 * call. The library is deterministic: identical config bytes and seed
 * produce identical outputs.
 */
#ifndef TACTSIM_TACTSIM_H
#define TACTSIM_TACTSIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tactsim_status {
    TACTSIM_OK = 0,
    TACTSIM_ERR_CONFIG = 1,   /* invalid configuration or argument */
    TACTSIM_ERR_OVERLOAD = 2, /* offered traffic exceeds all-on capacity */
    TACTSIM_ERR_IO = 3,       /* file read/write failure */
    TACTSIM_ERR_INTERNAL = 4
} tactsim_status;

typedef struct tactsim_config tactsim_config;
typedef struct tactsim_sim tactsim_sim;

typedef struct tactsim_stage_record {
    uint32_t stage;
    uint32_t state;  /* traffic-state integer, bit i = BS i indicator */
    uint32_t action; /* executed action integer, bit i = BS i active */
    int32_t repaired;
    double energy_w;
    double delay_flows;
    double total_cost;
    double cecr_running;
    double td_error;
} tactsim_stage_record;

const char* tactsim_version(void);
const char* tactsim_last_error(void);

/* ---- configuration ---- */
tactsim_status tactsim_config_load(const char* path, tactsim_config** out);
tactsim_status tactsim_config_parse(const char* json_text, tactsim_config** out);
tactsim_status tactsim_config_default(tactsim_config** out);
tactsim_status tactsim_config_set_seed(tactsim_config* cfg, uint64_t seed);
tactsim_status tactsim_config_set_stages(tactsim_config* cfg, long stages);
tactsim_status tactsim_config_n_bs(const tactsim_config* cfg, int* out);
void tactsim_config_free(tactsim_config* cfg);

/* ---- incremental simulation (with the paired all-on trajectory) ---- */
tactsim_status tactsim_sim_create(const tactsim_config* cfg, tactsim_sim** out);
tactsim_status tactsim_sim_step(tactsim_sim* sim, tactsim_stage_record* out_record);
tactsim_status tactsim_sim_run_all(tactsim_sim* sim);
long tactsim_sim_completed_stages(const tactsim_sim* sim);
tactsim_status tactsim_sim_record(const tactsim_sim* sim, uint32_t stage /* 1-based */,
                                  tactsim_stage_record* out_record);
/* per-BS system loads of one recorded stage; n_bs values are written */
tactsim_status tactsim_sim_stage_loads(const tactsim_sim* sim, uint32_t stage, double* out,
                                       size_t capacity);
tactsim_status tactsim_sim_export_policy(tactsim_sim* sim, const char* path);
void tactsim_sim_free(tactsim_sim* sim);

/* ---- batch harness entry points (what the CLI uses) ---- */
/* Runs the config to completion and writes stages.csv / summary.csv (and
 * policy.snapshot for learner schemes) under out_dir. */
tactsim_status tactsim_run_to_dir(const tactsim_config* cfg, const char* out_dir);
tactsim_status tactsim_sweep_file(const char* spec_path, const char* out_dir);
tactsim_status tactsim_transfer(const char* source_config_path, const char* target_config_path,
                                const char* out_dir);
/* Writes a one-line description of a policy snapshot into buf. */
tactsim_status tactsim_policy_info(const char* snapshot_path, char* buf, size_t capacity);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TACTSIM_TACTSIM_H */
