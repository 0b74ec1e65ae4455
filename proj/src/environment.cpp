#include "tactsim/environment.hpp"

#include <cmath>
#include <limits>

namespace tactsim {

Environment::Environment(TrafficField field, std::vector<BaseStation> roster, ChannelParams ch,
                         double varsigma)
    : field_(std::move(field)),
      roster_(std::move(roster)),
      ch_(ch),
      varsigma_(varsigma),
      radio_map_(field_.geometry(), roster_, ch_) {
    // fixed all-on reference association for the offered-traffic observable
    std::vector<std::int32_t> ref_assoc;
    {
        std::vector<double> rates;
        radio_map_.rates_for_mask(all_on_mask(), ch_, rates);
        ref_assoc.resize(static_cast<std::size_t>(radio_map_.n_cells()));
        std::vector<double> weight(roster_.size());
        for (int j = 0; j < n_bs(); ++j) {
            double denom = (1.0 - roster_[static_cast<std::size_t>(j)].constant_fraction) *
                           roster_[static_cast<std::size_t>(j)].max_op_power_w;
            if (varsigma_ > 0.0) denom += varsigma_;  // (1-0)^-2 == 1
            weight[static_cast<std::size_t>(j)] = 1.0 / denom;
        }
        for (int c = 0; c < radio_map_.n_cells(); ++c) {
            double best_metric = -1.0;
            std::int32_t best = -1;
            for (int j = 0; j < n_bs(); ++j) {
                double m = rates[static_cast<std::size_t>(j) * radio_map_.n_cells() + c] *
                           weight[static_cast<std::size_t>(j)];
                if (m > best_metric) {
                    best_metric = m;
                    best = static_cast<std::int32_t>(j);
                }
            }
            ref_assoc[static_cast<std::size_t>(c)] = best;
        }
        reference_unit_traffic_.assign(roster_.size(), 0.0);
        const auto& unit_load = field_.unit_cell_load_bits();
        for (int c = 0; c < radio_map_.n_cells(); ++c)
            reference_unit_traffic_[static_cast<std::size_t>(ref_assoc[static_cast<std::size_t>(c)])] +=
                unit_load[static_cast<std::size_t>(c)];
    }
}

std::vector<double> Environment::offered_reference(double stage_factor) const {
    std::vector<double> out = reference_unit_traffic_;
    for (double& v : out) v *= stage_factor;
    return out;
}

Environment::Eval Environment::finish_eval(std::uint32_t mask, std::vector<double> loads,
                                           std::vector<double> traffic) const {
    Eval ev;
    ev.loads = std::move(loads);
    ev.traffic = std::move(traffic);
    ev.max_load = 0.0;
    for (double rho : ev.loads)
        if (rho > ev.max_load) ev.max_load = rho;
    ev.feasible = ev.max_load < 1.0;
    ev.energy_w = energy_cost(ev.loads, mask, roster_);
    ev.delay_flows = ev.feasible ? delay_cost(ev.loads, mask) : std::numeric_limits<double>::infinity();
    ev.total = total_cost(ev.energy_w, ev.delay_flows, varsigma_);
    return ev;
}

const Environment::MaskBase& Environment::mask_base(std::uint32_t mask) const {
    auto it = mask_cache_.find(mask);
    if (it != mask_cache_.end()) return it->second;

    MaskBase base;
    radio_map_.rates_for_mask(mask, ch_, rates_scratch_);
    const int cells = radio_map_.n_cells();
    base.assoc.resize(static_cast<std::size_t>(cells));
    std::vector<double> weight(roster_.size(), 0.0);
    for (int j = 0; j < n_bs(); ++j) {
        if (((mask >> j) & 1u) == 0) continue;
        weight[static_cast<std::size_t>(j)] =
            1.0 / ((1.0 - roster_[static_cast<std::size_t>(j)].constant_fraction) *
                   roster_[static_cast<std::size_t>(j)].max_op_power_w);
    }
    base.unit_loads.assign(roster_.size(), 0.0);
    base.unit_traffic.assign(roster_.size(), 0.0);
    const auto& unit_load = field_.unit_cell_load_bits();
    for (int c = 0; c < cells; ++c) {
        double best_metric = -1.0;
        std::int32_t best = -1;
        for (int j = 0; j < n_bs(); ++j) {
            if (((mask >> j) & 1u) == 0) continue;
            double m = rates_scratch_[static_cast<std::size_t>(j) * cells + c] *
                       weight[static_cast<std::size_t>(j)];
            if (m > best_metric) {
                best_metric = m;
                best = static_cast<std::int32_t>(j);
            }
        }
        base.assoc[static_cast<std::size_t>(c)] = best;
        base.unit_traffic[static_cast<std::size_t>(best)] += unit_load[static_cast<std::size_t>(c)];
        base.unit_loads[static_cast<std::size_t>(best)] +=
            unit_load[static_cast<std::size_t>(c)] /
            rates_scratch_[static_cast<std::size_t>(best) * cells + c];
    }
    return mask_cache_.emplace(mask, std::move(base)).first->second;
}

Environment::Eval Environment::evaluate_direct(std::uint32_t mask, double stage_factor,
                                               const std::vector<double>& prev_loads) const {
    RegionGrid grid = field_.realize(stage_factor);
    std::vector<std::int32_t> assoc = associate(grid, roster_, mask, prev_loads, varsigma_, ch_);
    std::vector<double> loads = compute_loads(grid, roster_, assoc, mask, ch_);
    std::vector<double> traffic = bs_traffic_loads(grid, assoc, mask, n_bs());
    return finish_eval(mask, std::move(loads), std::move(traffic));
}

Environment::Eval Environment::evaluate(std::uint32_t mask, double stage_factor,
                                        const std::vector<double>& prev_loads) const {
    if (mask == 0) {
        // an empty active set serves nothing: feasible only with zero traffic
        Eval ev;
        ev.loads.assign(roster_.size(), 0.0);
        ev.traffic.assign(roster_.size(), 0.0);
        bool zero_traffic = offered_total(stage_factor) == 0.0;
        ev.feasible = zero_traffic;
        ev.max_load = zero_traffic ? 0.0 : std::numeric_limits<double>::infinity();
        ev.energy_w = 0.0;
        ev.delay_flows = zero_traffic ? 0.0 : std::numeric_limits<double>::infinity();
        ev.total = total_cost(ev.energy_w, ev.delay_flows, varsigma_);
        return ev;
    }
    if (varsigma_ != 0.0) return evaluate_direct(mask, stage_factor, prev_loads);

    const MaskBase& base = mask_base(mask);
    std::vector<double> loads(roster_.size());
    std::vector<double> traffic(roster_.size());
    for (std::size_t i = 0; i < roster_.size(); ++i) {
        loads[i] = base.unit_loads[i] * stage_factor;
        traffic[i] = base.unit_traffic[i] * stage_factor;
    }
    return finish_eval(mask, std::move(loads), std::move(traffic));
}

EngineBase::EngineBase(Environment& env, bool state_from_offered)
    : env_(env),
      state_from_offered_(state_from_offered),
      history_(env.n_bs()),
      prev_loads_(static_cast<std::size_t>(env.n_bs()), 0.0) {}

void EngineBase::initialize(double factor0) {
    std::vector<double> gamma0 = env_.offered_reference(factor0);
    state_ = quantize_state(gamma0, history_);
}

std::uint32_t EngineBase::observe(const Environment::Eval& eval, double factor) {
    if (state_from_offered_) {
        std::vector<double> gamma = env_.offered_reference(factor);
        state_ = quantize_state(gamma, history_);
    } else {
        state_ = quantize_state(eval.traffic, history_);
    }
    return state_;
}

LearnerEngine::LearnerEngine(Environment& env, HyperParams hp, RngStream action_rng,
                             bool state_from_offered)
    : EngineBase(env, state_from_offered),
      hp_(hp),
      schedules_{hp.transfer_theta},
      tables_(hp.value_init),
      rng_(action_rng),
      zero_loads_(static_cast<std::size_t>(env.n_bs()), 0.0) {}

std::pair<std::uint32_t, bool> LearnerEngine::repair_action(std::uint32_t action, double factor) {
    Environment::Eval ev = env_.evaluate(action, factor, prev_loads_);
    if (ev.feasible) return {action, false};

    std::uint32_t mask = action;
    const std::uint32_t all_on = env_.all_on_mask();
    while (mask != all_on) {
        double best_max = std::numeric_limits<double>::infinity();
        std::uint32_t best_mask = 0;
        for (int j = 0; j < env_.n_bs(); ++j) {
            if ((mask >> j) & 1u) continue;
            std::uint32_t cand = mask | (1u << j);
            Environment::Eval cev = env_.evaluate(cand, factor, prev_loads_);
            if (cev.max_load < best_max) {
                best_max = cev.max_load;
                best_mask = cand;
            }
        }
        mask = best_mask;
        if (best_max < 1.0) return {mask, true};
    }
    throw OverloadError("overload: even the all-on action cannot serve the offered traffic");
}

StageRecord LearnerEngine::step(long stage, double factor) {
    std::uint32_t s = state_;
    std::uint32_t selected = select_action(s, tables_, hp_, env_.n_bs(), rng_);
    auto [executed, repaired] = repair_action(selected, factor);
    Environment::Eval ev = env_.evaluate(executed, factor, prev_loads_);

    std::uint32_t s_next = observe(ev, factor);

    double delta = td_error(ev.total, tables_.value(s_next), tables_.value(s), hp_.discount);
    update_value(tables_, s, delta);
    // the actor is criticized with the TD error under the freshly updated
    // critic estimate
    double delta_actor = td_error(ev.total, tables_.value(s_next), tables_.value(s), hp_.discount);
    double zeta_k = hp_.transfer_enabled ? schedules_.zeta(tables_.pair_visits(s, executed)) : 0.0;
    update_native_policy(tables_, s, executed, delta_actor);
    tact_update(tables_, s, executed, zeta_k, hp_.projection_bound);

    StageRecord rec;
    rec.stage = static_cast<std::uint32_t>(stage);
    rec.state = s;
    rec.action = executed;
    rec.repaired = repaired;
    rec.loads = ev.loads;
    rec.energy_w = ev.energy_w;
    rec.delay_flows = ev.delay_flows;
    rec.total_cost = ev.total;
    rec.td_error = delta;
    prev_loads_ = ev.loads;
    return rec;
}

}  // namespace tactsim
