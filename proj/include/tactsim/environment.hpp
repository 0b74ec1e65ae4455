#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "tactsim/learner.hpp"
#include "tactsim/radio.hpp"
#include "tactsim/traffic.hpp"

namespace tactsim {

// One logged decision epoch.
struct StageRecord {
    std::uint32_t stage = 0;
    std::uint32_t state = 0;   // s^(k), before the action
    std::uint32_t action = 0;  // executed (post-repair) action
    bool repaired = false;
    std::vector<double> loads;  // per-BS rho
    double energy_w = 0.0;
    double delay_flows = 0.0;
    double total_cost = 0.0;
    double td_error = 0.0;
};

// Radio network + traffic field glued into a per-stage evaluator. When
// varsigma is zero the association is independent of the previous loads and
// loads scale linearly in the temporal factor, so per-mask results are cached.
class Environment {
public:
    Environment(TrafficField field, std::vector<BaseStation> roster, ChannelParams ch,
                double varsigma);

    struct Eval {
        std::vector<double> loads;    // rho per BS
        std::vector<double> traffic;  // Gamma per BS, bit/s
        double energy_w = 0.0;
        double delay_flows = 0.0;
        double total = 0.0;
        double max_load = 0.0;
        bool feasible = false;
    };

    Eval evaluate(std::uint32_t mask, double stage_factor,
                  const std::vector<double>& prev_loads) const;

    // Offered per-BS traffic under the fixed all-on reference association.
    std::vector<double> offered_reference(double stage_factor) const;
    double offered_total(double stage_factor) const { return field_.unit_offered_total_bits() * stage_factor; }

    const TrafficField& field() const { return field_; }
    const std::vector<BaseStation>& roster() const { return roster_; }
    const ChannelParams& channel() const { return ch_; }
    double varsigma() const { return varsigma_; }
    int n_bs() const { return static_cast<int>(roster_.size()); }
    std::uint32_t all_on_mask() const { return (1u << n_bs()) - 1u; }

private:
    struct MaskBase {
        std::vector<std::int32_t> assoc;
        std::vector<double> unit_loads;    // rho at unit factor
        std::vector<double> unit_traffic;  // Gamma at unit factor
    };

    Eval evaluate_direct(std::uint32_t mask, double stage_factor,
                         const std::vector<double>& prev_loads) const;
    const MaskBase& mask_base(std::uint32_t mask) const;
    Eval finish_eval(std::uint32_t mask, std::vector<double> loads,
                     std::vector<double> traffic) const;

    TrafficField field_;
    std::vector<BaseStation> roster_;
    ChannelParams ch_;
    double varsigma_ = 0.0;
    RadioMap radio_map_;
    std::vector<double> reference_unit_traffic_;  // all-on offered loads at unit factor
    mutable std::unordered_map<std::uint32_t, MaskBase> mask_cache_;
    mutable std::vector<double> rates_scratch_;
};

// Common per-engine observation state: previous loads, load history and the
// quantized traffic state. All engines initialize identically from a stage-0
// all-on observation so paired runs stay aligned.
class EngineBase {
public:
    EngineBase(Environment& env, bool state_from_offered);
    virtual ~EngineBase() = default;

    void initialize(double factor0);
    virtual StageRecord step(long stage, double factor) = 0;

    std::uint32_t current_state() const { return state_; }
    const LoadHistory& history() const { return history_; }

protected:
    // quantizes this stage's observation and advances the state
    std::uint32_t observe(const Environment::Eval& eval, double factor);

    Environment& env_;
    bool state_from_offered_ = false;
    LoadHistory history_;
    std::uint32_t state_ = 0;
    std::vector<double> prev_loads_;
};

enum class Scheme { Tact, Ac, Sota, AllOn };

// Tabular actor-critic / transfer actor-critic engine (one decision epoch per
// step, Boltzmann action selection, feasibility repair, TD criticism).
class LearnerEngine : public EngineBase {
public:
    LearnerEngine(Environment& env, HyperParams hp, RngStream action_rng,
                  bool state_from_offered);

    StageRecord step(long stage, double factor) override;

    // Turns BSs on one at a time (largest max-load reduction first) until the
    // association is feasible. Throws OverloadError when even all-on fails.
    std::pair<std::uint32_t, bool> repair_action(std::uint32_t action, double factor);

    LearnerTables& tables() { return tables_; }
    const LearnerTables& tables() const { return tables_; }
    const HyperParams& hyper() const { return hp_; }

private:
    HyperParams hp_;
    Schedules schedules_;
    LearnerTables tables_;
    RngStream rng_;
    std::vector<double> zero_loads_;
};

}  // namespace tactsim
