#include "tactsim/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

namespace tactsim {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

RunContext::RunContext(const RunConfig& cfg, const PolicySnapshot* exotic) : cfg_(cfg) {
    cfg_.validate();
    env_ = std::make_unique<Environment>(cfg_.make_environment());
    traffic_rng_ = RngStream(cfg_.learner.seed, "traffic");

    bool offered = cfg_.traffic.state_from_offered_traffic;
    switch (cfg_.learner.scheme) {
        case Scheme::Tact:
        case Scheme::Ac: {
            HyperParams hp;
            hp.temperature = cfg_.learner.temperature;
            hp.discount = cfg_.learner.discount;
            hp.transfer_theta = cfg_.learner.transfer_theta;
            hp.projection_bound = cfg_.learner.projection_bound;
            hp.varsigma = cfg_.learner.varsigma_w_s;
            hp.value_init = cfg_.learner.value_init;
            hp.transfer_enabled =
                cfg_.learner.scheme == Scheme::Tact && !cfg_.learner.zeta_zero_override;
            auto eng = std::make_unique<LearnerEngine>(*env_, hp,
                                                       RngStream(cfg_.learner.seed, "action"),
                                                       offered);
            if (cfg_.learner.scheme == Scheme::Tact) {
                if (exotic != nullptr) {
                    import_policy(*exotic, env_->n_bs(), eng->tables());
                } else if (!cfg_.learner.transfer_snapshot.empty()) {
                    PolicySnapshot snap = load_policy(cfg_.learner.transfer_snapshot);
                    import_policy(snap, env_->n_bs(), eng->tables());
                }
            }
            learner_ = eng.get();
            engine_ = std::move(eng);
            break;
        }
        case Scheme::Sota:
            engine_ = std::make_unique<SotaEngine>(*env_, offered);
            break;
        case Scheme::AllOn:
            engine_ = std::make_unique<AllOnEngine>(*env_, offered);
            break;
    }
    all_on_ = std::make_unique<AllOnEngine>(*env_, offered);

    double factor0 = env_->field().stage_factor(0, traffic_rng_);
    engine_->initialize(factor0);
    if (cfg_.learner.scheme != Scheme::AllOn) {
        // the paired all-on run consumes the identical traffic realization
        all_on_->initialize(factor0);
    }
}

const StageRecord& RunContext::step() {
    if (done()) throw std::logic_error("run is already complete");
    long stage = stage_ + 1;
    double factor = env_->field().stage_factor(stage, traffic_rng_);
    records_.push_back(engine_->step(stage, factor));
    const StageRecord& rec = records_.back();
    cum_energy_ += rec.energy_w;
    if (cfg_.learner.scheme == Scheme::AllOn) {
        cum_energy_all_on_ = cum_energy_;
    } else {
        all_on_records_.push_back(all_on_->step(stage, factor));
        cum_energy_all_on_ += all_on_records_.back().energy_w;
    }
    cecr_running_.push_back(cum_energy_all_on_ > 0.0 ? cum_energy_ / cum_energy_all_on_ : 1.0);
    stage_ = stage;
    return rec;
}

double RunContext::cecr_running() const {
    return cecr_running_.empty() ? 1.0 : cecr_running_.back();
}

const StageRecord& RunContext::record(std::size_t stage_1based) const {
    return records_.at(stage_1based - 1);
}

RunResult RunContext::finish() {
    while (!done()) step();

    RunResult result;
    result.history.records = records_;
    result.history.scheme = scheme_name(cfg_.learner.scheme);
    result.history.seed = cfg_.learner.seed;
    result.history.config_hash = cfg_.config_hash();
    result.history.traffic_hash = cfg_.traffic_hash();
    result.history.n_bs = env_->n_bs();

    result.all_on_history.records =
        cfg_.learner.scheme == Scheme::AllOn ? records_ : all_on_records_;
    result.all_on_history.scheme = "all_on";
    result.all_on_history.seed = cfg_.learner.seed;
    result.all_on_history.config_hash = result.history.config_hash;
    result.all_on_history.traffic_hash = result.history.traffic_hash;
    result.all_on_history.n_bs = env_->n_bs();

    RunSummary& s = result.summary;
    s.scheme = result.history.scheme;
    s.seed = cfg_.learner.seed;
    long n = cfg_.learner.stages;
    if (n > 0) {
        s.final_cecr = cecr(result.history, result.all_on_history, static_cast<std::size_t>(n));
        double d = 0.0;
        for (const auto& r : records_) d += r.delay_flows;
        s.mean_delay_flows = d / static_cast<double>(n);
    }
    for (long c : cfg_.output.checkpoints) {
        std::optional<double> v;
        if (c <= n) v = cecr(result.history, result.all_on_history, static_cast<std::size_t>(c));
        s.checkpoint_cecrs.emplace_back(c, v);
    }

    if (learner_ != nullptr) {
        result.policy = export_policy(learner_->tables(), env_->n_bs(),
                                      static_cast<std::uint64_t>(n), cfg_.learner.seed,
                                      cfg_.traffic_hash());
    }
    return result;
}

RunResult run(const RunConfig& cfg, const PolicySnapshot* exotic) {
    RunContext ctx(cfg, exotic);
    return ctx.finish();
}

void write_stage_csv(const std::string& path, const RunHistory& history,
                     const std::vector<double>& cecr_running) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write stage CSV: " + path);
    out << "stage,state_int,action_int,repaired,energy_w,delay_flows,total_cost,cecr_running,"
           "td_error\n";
    for (std::size_t i = 0; i < history.records.size(); ++i) {
        const StageRecord& r = history.records[i];
        out << r.stage << ',' << r.state << ',' << r.action << ',' << (r.repaired ? 1 : 0) << ','
            << format_double(r.energy_w) << ',' << format_double(r.delay_flows) << ','
            << format_double(r.total_cost) << ',' << format_double(cecr_running[i]) << ','
            << format_double(r.td_error) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

namespace {

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

}  // namespace

void write_summary_csv(const std::string& path, const std::vector<RunSummary>& rows,
                       const std::vector<long>& checkpoints) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write summary CSV: " + path);
    out << "scheme,seed,cecr_final";
    for (long c : checkpoints) out << ",cecr_at_" << c;
    out << ",mean_delay_flows,improvement_vs_ac,kl_source_target\n";
    for (const auto& s : rows) {
        out << s.scheme << ',' << s.seed << ',' << opt_str(s.final_cecr);
        for (long c : checkpoints) {
            std::optional<double> v;
            for (const auto& [stage, value] : s.checkpoint_cecrs)
                if (stage == c) v = value;
            out << ',' << opt_str(v);
        }
        out << ',' << format_double(s.mean_delay_flows) << ',' << opt_str(s.improvement_vs_ac)
            << ',' << opt_str(s.kl_source_target) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

RunResult run_to_dir(const RunConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunResult result = run(cfg);
    // recompute the running CECR from the stored histories
    std::vector<double> cecr_running(result.history.records.size());
    double ce = 0.0, ca = 0.0;
    for (std::size_t i = 0; i < result.history.records.size(); ++i) {
        ce += result.history.records[i].energy_w;
        ca += result.all_on_history.records[i].energy_w;
        cecr_running[i] = ca > 0.0 ? ce / ca : 1.0;
    }
    write_stage_csv(out_dir + "/stages.csv", result.history, cecr_running);
    write_summary_csv(out_dir + "/summary.csv", {result.summary}, cfg.output.checkpoints);
    if (cfg.learner.scheme == Scheme::Tact || cfg.learner.scheme == Scheme::Ac)
        save_policy(result.policy, out_dir + "/policy.snapshot");
    return result;
}

SweepResult sweep(const SweepSpec& spec) {
    SweepResult result;
    for (double value : spec.values) {
        for (Scheme scheme : spec.schemes) {
            for (std::uint64_t seed : spec.seeds) {
                SweepCell cell;
                cell.value = value;
                cell.scheme = scheme;
                cell.seed = seed;
                try {
                    RunConfig cfg = apply_axis(spec.base, spec.axis, value);
                    cfg.learner.scheme = scheme;
                    cfg.learner.seed = seed;
                    cfg.validate();
                    cell.summary = run(cfg).summary;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    std::sort(result.cells.begin(), result.cells.end(), [](const SweepCell& a, const SweepCell& b) {
        if (a.value != b.value) return a.value < b.value;
        std::string sa = scheme_name(a.scheme), sb = scheme_name(b.scheme);
        if (sa != sb) return sa < sb;
        return a.seed < b.seed;
    });

    for (double value : spec.values) {
        for (Scheme scheme : spec.schemes) {
            SweepResult::MeanRow row;
            row.value = value;
            row.scheme = scheme;
            std::map<long, std::pair<double, int>> acc;  // stage -> (sum, count)
            double final_sum = 0.0;
            int final_count = 0;
            for (const auto& cell : result.cells) {
                if (cell.value != value || cell.scheme != scheme || !cell.error.empty()) continue;
                for (const auto& [stage, v] : cell.summary.checkpoint_cecrs) {
                    if (v) {
                        acc[stage].first += *v;
                        acc[stage].second += 1;
                    }
                }
                if (cell.summary.final_cecr) {
                    final_sum += *cell.summary.final_cecr;
                    final_count += 1;
                }
            }
            for (long c : spec.base.output.checkpoints) {
                std::optional<double> mean;
                auto it = acc.find(c);
                if (it != acc.end() && it->second.second > 0)
                    mean = it->second.first / it->second.second;
                row.mean_checkpoint_cecrs.emplace_back(c, mean);
            }
            if (final_count > 0) row.mean_final_cecr = final_sum / final_count;
            result.means.push_back(std::move(row));
        }
    }
    std::sort(result.means.begin(), result.means.end(),
              [](const SweepResult::MeanRow& a, const SweepResult::MeanRow& b) {
                  if (a.value != b.value) return a.value < b.value;
                  return std::string(scheme_name(a.scheme)) < scheme_name(b.scheme);
              });
    return result;
}

void write_sweep_csvs(const std::string& out_dir, const SweepSpec& spec,
                      const SweepResult& result) {
    std::filesystem::create_directories(out_dir);
    const auto& checkpoints = spec.base.output.checkpoints;
    {
        std::ofstream out(out_dir + "/summary.csv", std::ios::binary);
        if (!out) throw IoError("cannot write sweep summary: " + out_dir);
        out << "axis,value,scheme,seed,cecr_final";
        for (long c : checkpoints) out << ",cecr_at_" << c;
        out << ",mean_delay_flows\n";
        for (const auto& cell : result.cells) {
            if (!cell.error.empty()) continue;
            out << spec.axis << ',' << format_double(cell.value) << ',' << scheme_name(cell.scheme)
                << ',' << cell.seed << ',' << opt_str(cell.summary.final_cecr);
            for (long c : checkpoints) {
                std::optional<double> v;
                for (const auto& [stage, value] : cell.summary.checkpoint_cecrs)
                    if (stage == c) v = value;
                out << ',' << opt_str(v);
            }
            out << ',' << format_double(cell.summary.mean_delay_flows) << "\n";
        }
    }
    {
        std::ofstream out(out_dir + "/means.csv", std::ios::binary);
        if (!out) throw IoError("cannot write sweep means: " + out_dir);
        out << "axis,value,scheme,cecr_final_mean";
        for (long c : checkpoints) out << ",cecr_at_" << c << "_mean";
        out << "\n";
        for (const auto& row : result.means) {
            out << spec.axis << ',' << format_double(row.value) << ',' << scheme_name(row.scheme)
                << ',' << opt_str(row.mean_final_cecr);
            for (const auto& [stage, v] : row.mean_checkpoint_cecrs) out << ',' << opt_str(v);
            out << "\n";
        }
    }
    {
        std::ofstream out(out_dir + "/failures.csv", std::ios::binary);
        if (!out) throw IoError("cannot write sweep failures: " + out_dir);
        out << "axis,value,scheme,seed,error\n";
        for (const auto& cell : result.cells) {
            if (cell.error.empty()) continue;
            std::string msg = cell.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out << spec.axis << ',' << format_double(cell.value) << ',' << scheme_name(cell.scheme)
                << ',' << cell.seed << ',' << msg << "\n";
        }
    }
}

SweepResult sweep_to_dir(const SweepSpec& spec, const std::string& out_dir) {
    SweepResult result = sweep(spec);
    write_sweep_csvs(out_dir, spec, result);
    return result;
}

TransferResult transfer_pipeline(RunConfig source_cfg, RunConfig target_cfg,
                                 const std::string& snapshot_path) {
    source_cfg.learner.scheme = Scheme::Ac;
    source_cfg.validate();
    target_cfg.validate();
    if (source_cfg.n_bs() != target_cfg.n_bs())
        throw ConfigError("transfer: source and target BS counts differ (" +
                          std::to_string(source_cfg.n_bs()) + " vs " +
                          std::to_string(target_cfg.n_bs()) + ")");

    TransferResult result;
    result.source = run(source_cfg);
    result.snapshot = result.source.policy;

    if (!snapshot_path.empty()) {
        save_policy(result.snapshot, snapshot_path);
        PolicySnapshot reloaded = load_policy(snapshot_path);
        if (serialize_policy(reloaded) != serialize_policy(result.snapshot))
            throw IoError("policy snapshot round trip mismatch: " + snapshot_path);
    }

    RunConfig tact_cfg = target_cfg;
    tact_cfg.learner.scheme = Scheme::Tact;
    tact_cfg.learner.transfer_snapshot = snapshot_path;
    result.target_tact = snapshot_path.empty() ? run(tact_cfg, &result.snapshot) : run(tact_cfg);

    RunConfig ac_cfg = target_cfg;
    ac_cfg.learner.scheme = Scheme::Ac;
    ac_cfg.learner.transfer_snapshot.clear();
    result.target_ac = run(ac_cfg);

    long n = target_cfg.learner.stages;
    if (n > 0) {
        result.improvement_final = improvement(result.target_tact.history,
                                               result.target_ac.history,
                                               static_cast<std::size_t>(n));
        result.kl_source_target = kl_divergence(task_state_distribution(result.source.history),
                                                task_state_distribution(result.target_ac.history));
        result.target_tact.summary.improvement_vs_ac = result.improvement_final;
        result.target_tact.summary.kl_source_target = result.kl_source_target;
    }
    return result;
}

TransferResult transfer_to_dir(RunConfig source_cfg, RunConfig target_cfg,
                               const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<long> checkpoints = source_cfg.output.checkpoints;
    TransferResult result =
        transfer_pipeline(std::move(source_cfg), std::move(target_cfg),
                          out_dir + "/source_policy.snapshot");

    auto dump = [&](const RunResult& rr, const std::string& name) {
        std::vector<double> cecr_running(rr.history.records.size());
        double ce = 0.0, ca = 0.0;
        for (std::size_t i = 0; i < rr.history.records.size(); ++i) {
            ce += rr.history.records[i].energy_w;
            ca += rr.all_on_history.records[i].energy_w;
            cecr_running[i] = ca > 0.0 ? ce / ca : 1.0;
        }
        write_stage_csv(out_dir + "/" + name + "_stages.csv", rr.history, cecr_running);
    };
    dump(result.source, "source");
    dump(result.target_tact, "target_tact");
    dump(result.target_ac, "target_ac");

    std::vector<RunSummary> rows{result.source.summary, result.target_tact.summary,
                                 result.target_ac.summary};
    write_summary_csv(out_dir + "/summary.csv", rows, checkpoints);
    return result;
}

}  // namespace tactsim
