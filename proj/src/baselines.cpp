#include "tactsim/baselines.hpp"

namespace tactsim {

namespace {

Environment::Eval require_feasible(const Environment& env, std::uint32_t mask, double factor,
                                   const std::vector<double>& prev_loads) {
    Environment::Eval ev = env.evaluate(mask, factor, prev_loads);
    if (!ev.feasible)
        throw OverloadError("overload: all-on association is infeasible for the offered traffic");
    return ev;
}

}  // namespace

CostBreakdown all_on_stage(const Environment& env, double factor,
                           const std::vector<double>& prev_loads) {
    Environment::Eval ev = require_feasible(env, env.all_on_mask(), factor, prev_loads);
    CostBreakdown cb;
    cb.varsigma = env.varsigma();
    cb.energy_w = ev.energy_w;
    cb.delay_flows = ev.delay_flows;
    cb.total = ev.total;
    return cb;
}

std::pair<std::uint32_t, CostBreakdown> sota_greedy_stage(const Environment& env, double factor,
                                                          const std::vector<double>& prev_loads) {
    std::uint32_t mask = env.all_on_mask();
    Environment::Eval current = require_feasible(env, mask, factor, prev_loads);

    bool improved = true;
    while (improved && mask != 0) {
        improved = false;
        double best_total = current.total;
        std::uint32_t best_mask = mask;
        Environment::Eval best_eval;
        for (int j = 0; j < env.n_bs(); ++j) {
            if (((mask >> j) & 1u) == 0) continue;
            std::uint32_t cand = mask & ~(1u << j);
            Environment::Eval ev = env.evaluate(cand, factor, prev_loads);
            if (!ev.feasible) continue;
            if (ev.total < best_total) {
                best_total = ev.total;
                best_mask = cand;
                best_eval = ev;
                improved = true;
            }
        }
        if (improved) {
            mask = best_mask;
            current = best_eval;
        }
    }

    CostBreakdown cb;
    cb.varsigma = env.varsigma();
    cb.energy_w = current.energy_w;
    cb.delay_flows = current.delay_flows;
    cb.total = current.total;
    return {mask, cb};
}

AllOnEngine::AllOnEngine(Environment& env, bool state_from_offered)
    : EngineBase(env, state_from_offered) {}

StageRecord AllOnEngine::step(long stage, double factor) {
    Environment::Eval ev = require_feasible(env_, env_.all_on_mask(), factor, prev_loads_);
    StageRecord rec;
    rec.stage = static_cast<std::uint32_t>(stage);
    rec.state = state_;
    rec.action = env_.all_on_mask();
    rec.repaired = false;
    rec.loads = ev.loads;
    rec.energy_w = ev.energy_w;
    rec.delay_flows = ev.delay_flows;
    rec.total_cost = ev.total;
    rec.td_error = 0.0;
    observe(ev, factor);
    prev_loads_ = ev.loads;
    return rec;
}

SotaEngine::SotaEngine(Environment& env, bool state_from_offered)
    : EngineBase(env, state_from_offered) {}

StageRecord SotaEngine::step(long stage, double factor) {
    auto [mask, cb] = sota_greedy_stage(env_, factor, prev_loads_);
    Environment::Eval ev = env_.evaluate(mask, factor, prev_loads_);
    last_action_ = mask;

    StageRecord rec;
    rec.stage = static_cast<std::uint32_t>(stage);
    rec.state = state_;
    rec.action = mask;
    rec.repaired = false;
    rec.loads = ev.loads;
    rec.energy_w = cb.energy_w;
    rec.delay_flows = cb.delay_flows;
    rec.total_cost = cb.total;
    rec.td_error = 0.0;
    observe(ev, factor);
    prev_loads_ = ev.loads;
    return rec;
}

}  // namespace tactsim
