#include "tactsim/tactsim.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "tactsim/harness.hpp"

using namespace tactsim;

struct tactsim_config {
    RunConfig cfg;
};

struct tactsim_sim {
    RunContext ctx;
    explicit tactsim_sim(const RunConfig& cfg) : ctx(cfg) {}
};

namespace {

thread_local std::string g_last_error;

tactsim_status fail(tactsim_status st, const char* what) {
    g_last_error = what;
    return st;
}

template <typename Fn>
tactsim_status guarded(Fn&& fn) {
    try {
        fn();
        return TACTSIM_OK;
    } catch (const ConfigError& e) {
        return fail(TACTSIM_ERR_CONFIG, e.what());
    } catch (const OverloadError& e) {
        return fail(TACTSIM_ERR_OVERLOAD, e.what());
    } catch (const IoError& e) {
        return fail(TACTSIM_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(TACTSIM_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return fail(TACTSIM_ERR_INTERNAL, e.what());
    }
}

void fill_record(const StageRecord& rec, double cecr_running, tactsim_stage_record* out) {
    out->stage = rec.stage;
    out->state = rec.state;
    out->action = rec.action;
    out->repaired = rec.repaired ? 1 : 0;
    out->energy_w = rec.energy_w;
    out->delay_flows = rec.delay_flows;
    out->total_cost = rec.total_cost;
    out->cecr_running = cecr_running;
    out->td_error = rec.td_error;
}

}  // namespace

extern "C" {

const char* tactsim_version(void) { return "1.0.0"; }

const char* tactsim_last_error(void) { return g_last_error.c_str(); }

tactsim_status tactsim_config_load(const char* path, tactsim_config** out) {
    if (path == nullptr || out == nullptr)
        return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] { *out = new tactsim_config{load_config(path)}; });
}

tactsim_status tactsim_config_parse(const char* json_text, tactsim_config** out) {
    if (json_text == nullptr || out == nullptr)
        return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] { *out = new tactsim_config{config_from_json_text(json_text)}; });
}

tactsim_status tactsim_config_default(tactsim_config** out) {
    if (out == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] {
        RunConfig cfg;
        cfg.validate();
        *out = new tactsim_config{std::move(cfg)};
    });
}

tactsim_status tactsim_config_set_seed(tactsim_config* cfg, uint64_t seed) {
    if (cfg == nullptr) return fail(TACTSIM_ERR_CONFIG, "null config");
    cfg->cfg.learner.seed = seed;
    return TACTSIM_OK;
}

tactsim_status tactsim_config_set_stages(tactsim_config* cfg, long stages) {
    if (cfg == nullptr) return fail(TACTSIM_ERR_CONFIG, "null config");
    if (stages < 0) return fail(TACTSIM_ERR_CONFIG, "stage count must be >= 0");
    cfg->cfg.learner.stages = stages;
    return TACTSIM_OK;
}

tactsim_status tactsim_config_n_bs(const tactsim_config* cfg, int* out) {
    if (cfg == nullptr || out == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] { *out = cfg->cfg.n_bs(); });
}

void tactsim_config_free(tactsim_config* cfg) { delete cfg; }

tactsim_status tactsim_sim_create(const tactsim_config* cfg, tactsim_sim** out) {
    if (cfg == nullptr || out == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] { *out = new tactsim_sim(cfg->cfg); });
}

tactsim_status tactsim_sim_step(tactsim_sim* sim, tactsim_stage_record* out_record) {
    if (sim == nullptr) return fail(TACTSIM_ERR_CONFIG, "null simulation");
    if (sim->ctx.done()) return fail(TACTSIM_ERR_CONFIG, "run is already complete");
    return guarded([&] {
        const StageRecord& rec = sim->ctx.step();
        if (out_record != nullptr) fill_record(rec, sim->ctx.cecr_running(), out_record);
    });
}

tactsim_status tactsim_sim_run_all(tactsim_sim* sim) {
    if (sim == nullptr) return fail(TACTSIM_ERR_CONFIG, "null simulation");
    return guarded([&] {
        while (!sim->ctx.done()) sim->ctx.step();
    });
}

long tactsim_sim_completed_stages(const tactsim_sim* sim) {
    return sim == nullptr ? 0 : sim->ctx.completed_stages();
}

tactsim_status tactsim_sim_record(const tactsim_sim* sim, uint32_t stage,
                                  tactsim_stage_record* out_record) {
    if (sim == nullptr || out_record == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    if (stage < 1 || static_cast<long>(stage) > sim->ctx.completed_stages())
        return fail(TACTSIM_ERR_CONFIG, "stage index out of range");
    return guarded([&] { fill_record(sim->ctx.record(stage), sim->ctx.cecr_at(stage), out_record); });
}

tactsim_status tactsim_sim_stage_loads(const tactsim_sim* sim, uint32_t stage, double* out,
                                       size_t capacity) {
    if (sim == nullptr || out == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    if (stage < 1 || static_cast<long>(stage) > sim->ctx.completed_stages())
        return fail(TACTSIM_ERR_CONFIG, "stage index out of range");
    return guarded([&] {
        const StageRecord& rec = sim->ctx.record(stage);
        if (capacity < rec.loads.size()) throw ConfigError("loads buffer too small");
        std::memcpy(out, rec.loads.data(), rec.loads.size() * sizeof(double));
    });
}

tactsim_status tactsim_sim_export_policy(tactsim_sim* sim, const char* path) {
    if (sim == nullptr || path == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] {
        const LearnerEngine* eng = sim->ctx.learner();
        if (eng == nullptr)
            throw ConfigError("policy export requires a learner scheme (tact or ac)");
        PolicySnapshot snap = export_policy(
            eng->tables(), sim->ctx.config().n_bs(),
            static_cast<uint64_t>(sim->ctx.completed_stages()), sim->ctx.config().learner.seed,
            sim->ctx.config().traffic_hash());
        save_policy(snap, path);
    });
}

void tactsim_sim_free(tactsim_sim* sim) { delete sim; }

tactsim_status tactsim_run_to_dir(const tactsim_config* cfg, const char* out_dir) {
    if (cfg == nullptr || out_dir == nullptr) return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] { run_to_dir(cfg->cfg, out_dir); });
}

tactsim_status tactsim_sweep_file(const char* spec_path, const char* out_dir) {
    if (spec_path == nullptr || out_dir == nullptr)
        return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] { sweep_to_dir(load_sweep(spec_path), out_dir); });
}

tactsim_status tactsim_transfer(const char* source_config_path, const char* target_config_path,
                                const char* out_dir) {
    if (source_config_path == nullptr || target_config_path == nullptr || out_dir == nullptr)
        return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] {
        transfer_to_dir(load_config(source_config_path), load_config(target_config_path), out_dir);
    });
}

tactsim_status tactsim_policy_info(const char* snapshot_path, char* buf, size_t capacity) {
    if (snapshot_path == nullptr || buf == nullptr || capacity == 0)
        return fail(TACTSIM_ERR_CONFIG, "null argument");
    return guarded([&] {
        PolicySnapshot snap = load_policy(snapshot_path);
        std::snprintf(buf, capacity,
                      "tactsim-policy v%d n_bs=%d stages=%llu seed=%llu config_hash=%llx entries=%zu",
                      snap.version, snap.n_bs, static_cast<unsigned long long>(snap.stages),
                      static_cast<unsigned long long>(snap.seed),
                      static_cast<unsigned long long>(snap.config_hash), snap.entries.size());
    });
}

}  // extern "C"
