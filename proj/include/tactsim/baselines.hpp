#pragma once

#include "tactsim/environment.hpp"

namespace tactsim {

// All BSs stay active every stage; the CECR denominator.
class AllOnEngine : public EngineBase {
public:
    AllOnEngine(Environment& env, bool state_from_offered);
    StageRecord step(long stage, double factor) override;
};

// Oracle-knowledge greedy switch-off: starts from all-on and commits the
// single switch-off with the largest total-cost reduction among feasible
// candidates until none improves. Deterministic; ties go to the lowest BS id.
class SotaEngine : public EngineBase {
public:
    SotaEngine(Environment& env, bool state_from_offered);
    StageRecord step(long stage, double factor) override;

    std::uint32_t last_action() const { return last_action_; }

private:
    std::uint32_t last_action_ = 0;
};

// Single-stage views used by tests; prev_loads follow the spec's association
// rule (previous stage's committed loads, zeros on the first stage).
CostBreakdown all_on_stage(const Environment& env, double factor,
                           const std::vector<double>& prev_loads);
std::pair<std::uint32_t, CostBreakdown> sota_greedy_stage(const Environment& env, double factor,
                                                          const std::vector<double>& prev_loads);

}  // namespace tactsim
