// Command-line front end for the tactsim shared library. Links only the C
// API; exit codes: 0 success, 1 config error, 2 runtime (overload) error.
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "tactsim/tactsim.h"

namespace {

int exit_code_for(tactsim_status st) {
    switch (st) {
        case TACTSIM_OK: return 0;
        case TACTSIM_ERR_OVERLOAD: return 2;
        default: return 1;
    }
}

int finish(tactsim_status st) {
    if (st != TACTSIM_OK) std::fprintf(stderr, "tactsim: error: %s\n", tactsim_last_error());
    return exit_code_for(st);
}

struct ConfigHandle {
    tactsim_config* ptr = nullptr;
    ~ConfigHandle() { tactsim_config_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Base-station sleep-scheduling simulator with a transfer actor-critic learner"};
    app.set_version_flag("--version", std::string("tactsim ") + tactsim_version());
    app.require_subcommand(1);

    // run
    std::string run_config, run_out = "out";
    std::uint64_t run_seed = 0;
    bool run_seed_set = false;
    long run_stages = -1;
    auto* run_cmd = app.add_subcommand("run", "Run one simulation and write per-stage/summary CSVs");
    run_cmd->add_option("--config", run_config, "Run config JSON")->required();
    run_cmd->add_option("--seed", run_seed, "Override the config seed")
        ->each([&](const std::string&) { run_seed_set = true; });
    run_cmd->add_option("--stages", run_stages, "Override the stage count");
    run_cmd->add_option("--out", run_out, "Output directory");

    // sweep
    std::string sweep_spec, sweep_out = "out";
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep from a spec file");
    sweep_cmd->add_option("--spec", sweep_spec, "Sweep spec JSON")->required();
    sweep_cmd->add_option("--out", sweep_out, "Output directory");

    // transfer
    std::string tr_source, tr_target, tr_out = "out";
    auto* tr_cmd = app.add_subcommand(
        "transfer", "Train a source task, transfer its policy and run the target task");
    tr_cmd->add_option("--source", tr_source, "Source run config JSON")->required();
    tr_cmd->add_option("--target", tr_target, "Target run config JSON")->required();
    tr_cmd->add_option("--out", tr_out, "Output directory");

    // export-policy
    std::string ep_config, ep_out = "policy.snapshot";
    std::uint64_t ep_seed = 0;
    bool ep_seed_set = false;
    long ep_stages = -1;
    auto* ep_cmd = app.add_subcommand("export-policy",
                                      "Run a learner config and export the learned policy");
    ep_cmd->add_option("--config", ep_config, "Run config JSON")->required();
    ep_cmd->add_option("--seed", ep_seed, "Override the config seed")
        ->each([&](const std::string&) { ep_seed_set = true; });
    ep_cmd->add_option("--stages", ep_stages, "Override the stage count");
    ep_cmd->add_option("--out", ep_out, "Snapshot output path");

    // inspect-policy
    std::string ip_snapshot;
    auto* ip_cmd = app.add_subcommand("inspect-policy", "Print policy snapshot metadata");
    ip_cmd->add_option("--snapshot", ip_snapshot, "Snapshot path")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        ConfigHandle cfg;
        tactsim_status st = tactsim_config_load(run_config.c_str(), &cfg.ptr);
        if (st != TACTSIM_OK) return finish(st);
        if (run_seed_set) tactsim_config_set_seed(cfg.ptr, run_seed);
        if (run_stages >= 0) {
            st = tactsim_config_set_stages(cfg.ptr, run_stages);
            if (st != TACTSIM_OK) return finish(st);
        }
        st = tactsim_run_to_dir(cfg.ptr, run_out.c_str());
        if (st == TACTSIM_OK) std::printf("wrote %s/stages.csv and %s/summary.csv\n",
                                          run_out.c_str(), run_out.c_str());
        return finish(st);
    }

    if (sweep_cmd->parsed()) {
        tactsim_status st = tactsim_sweep_file(sweep_spec.c_str(), sweep_out.c_str());
        if (st == TACTSIM_OK)
            std::printf("wrote %s/summary.csv, %s/means.csv and %s/failures.csv\n",
                        sweep_out.c_str(), sweep_out.c_str(), sweep_out.c_str());
        return finish(st);
    }

    if (tr_cmd->parsed()) {
        tactsim_status st = tactsim_transfer(tr_source.c_str(), tr_target.c_str(), tr_out.c_str());
        if (st == TACTSIM_OK) std::printf("wrote transfer outputs under %s\n", tr_out.c_str());
        return finish(st);
    }

    if (ep_cmd->parsed()) {
        ConfigHandle cfg;
        tactsim_status st = tactsim_config_load(ep_config.c_str(), &cfg.ptr);
        if (st != TACTSIM_OK) return finish(st);
        if (ep_seed_set) tactsim_config_set_seed(cfg.ptr, ep_seed);
        if (ep_stages >= 0) {
            st = tactsim_config_set_stages(cfg.ptr, ep_stages);
            if (st != TACTSIM_OK) return finish(st);
        }
        tactsim_sim* sim = nullptr;
        st = tactsim_sim_create(cfg.ptr, &sim);
        if (st != TACTSIM_OK) return finish(st);
        st = tactsim_sim_run_all(sim);
        if (st == TACTSIM_OK) st = tactsim_sim_export_policy(sim, ep_out.c_str());
        tactsim_sim_free(sim);
        if (st == TACTSIM_OK) std::printf("wrote %s\n", ep_out.c_str());
        return finish(st);
    }

    if (ip_cmd->parsed()) {
        char buf[256];
        tactsim_status st = tactsim_policy_info(ip_snapshot.c_str(), buf, sizeof(buf));
        if (st == TACTSIM_OK) std::printf("%s\n", buf);
        return finish(st);
    }

    return 1;
}
