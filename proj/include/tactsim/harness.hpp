#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tactsim/baselines.hpp"
#include "tactsim/config.hpp"
#include "tactsim/metrics.hpp"

namespace tactsim {

struct RunSummary {
    std::string scheme;
    std::uint64_t seed = 0;
    std::optional<double> final_cecr;                          // empty for stages=0
    std::vector<std::pair<long, std::optional<double>>> checkpoint_cecrs;
    double mean_delay_flows = 0.0;
    std::optional<double> improvement_vs_ac;
    std::optional<double> kl_source_target;
};

struct RunResult {
    RunHistory history;
    RunHistory all_on_history;  // paired run on identical traffic
    RunSummary summary;
    PolicySnapshot policy;  // exported native policy (empty for baselines)
};

// Incremental run with the paired all-on trajectory; the C API stepping
// surface wraps this.
class RunContext {
public:
    // exotic, when given, is imported directly instead of loading
    // cfg.learner.transfer_snapshot from disk.
    explicit RunContext(const RunConfig& cfg, const PolicySnapshot* exotic = nullptr);

    long total_stages() const { return cfg_.learner.stages; }
    long completed_stages() const { return stage_; }
    bool done() const { return stage_ >= cfg_.learner.stages; }

    // advances one stage; returns the scheme record
    const StageRecord& step();
    double cecr_running() const;
    double cecr_at(std::size_t stage_1based) const { return cecr_running_.at(stage_1based - 1); }
    const StageRecord& record(std::size_t stage_1based) const;

    RunResult finish();  // builds histories + summary (runs remaining stages)

    const RunConfig& config() const { return cfg_; }
    const LearnerEngine* learner() const { return learner_; }

private:
    RunConfig cfg_;
    std::unique_ptr<Environment> env_;
    std::unique_ptr<EngineBase> engine_;
    std::unique_ptr<AllOnEngine> all_on_;
    LearnerEngine* learner_ = nullptr;  // non-owning view when scheme is a learner
    RngStream traffic_rng_;
    long stage_ = 0;
    double cum_energy_ = 0.0;
    double cum_energy_all_on_ = 0.0;
    std::vector<StageRecord> records_;
    std::vector<StageRecord> all_on_records_;
    std::vector<double> cecr_running_;
};

RunResult run(const RunConfig& cfg, const PolicySnapshot* exotic = nullptr);

// Writes the per-stage CSV: stage, state_int, action_int, repaired, energy_w,
// delay_flows, total_cost, cecr_running, td_error.
void write_stage_csv(const std::string& path, const RunHistory& history,
                     const std::vector<double>& cecr_running);

void write_summary_csv(const std::string& path, const std::vector<RunSummary>& rows,
                       const std::vector<long>& checkpoints);

// Runs a config and writes stages.csv / summary.csv (and policy.snapshot for
// learner schemes) under out_dir.
RunResult run_to_dir(const RunConfig& cfg, const std::string& out_dir);

struct SweepCell {
    double value = 0.0;
    Scheme scheme = Scheme::Ac;
    std::uint64_t seed = 0;
    RunSummary summary;
    std::string error;  // empty on success
};

struct SweepResult {
    std::vector<SweepCell> cells;  // sorted by (value, scheme, seed)
    // mean-over-seeds checkpoint CECRs per (value, scheme), same sort order
    struct MeanRow {
        double value = 0.0;
        Scheme scheme = Scheme::Ac;
        std::vector<std::pair<long, std::optional<double>>> mean_checkpoint_cecrs;
        std::optional<double> mean_final_cecr;
    };
    std::vector<MeanRow> means;
};

SweepResult sweep(const SweepSpec& spec);
void write_sweep_csvs(const std::string& out_dir, const SweepSpec& spec, const SweepResult& result);
SweepResult sweep_to_dir(const SweepSpec& spec, const std::string& out_dir);

struct TransferResult {
    RunResult source;       // scheme ac
    RunResult target_tact;  // with the source policy imported
    RunResult target_ac;    // learning from scratch
    double improvement_final = 0.0;
    double kl_source_target = 0.0;
    PolicySnapshot snapshot;
};

// Source runs classical AC, its policy is exported and imported as the
// target's exotic policy; the target also runs classical AC for the
// improvement metric. Both configs must agree on the BS count. When
// snapshot_path is non-empty the snapshot goes through a verified file round
// trip before the target run.
TransferResult transfer_pipeline(RunConfig source_cfg, RunConfig target_cfg,
                                 const std::string& snapshot_path = "");
TransferResult transfer_to_dir(RunConfig source_cfg, RunConfig target_cfg,
                               const std::string& out_dir);

std::string format_double(double v);

}  // namespace tactsim
