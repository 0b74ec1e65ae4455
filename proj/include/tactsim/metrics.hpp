#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tactsim/environment.hpp"

namespace tactsim {

struct RunHistory {
    std::vector<StageRecord> records;  // stage indices contiguous from 1
    std::string scheme;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::uint64_t traffic_hash = 0;  // traffic+network sections, identifies the realization
    int n_bs = 0;
};

// Cumulative energy consumption ratio: scheme energy over all-on energy for
// the first upto_stage records. Both histories must come from identical
// traffic realizations.
double cecr(const RunHistory& scheme_history, const RunHistory& all_on_history,
            std::size_t upto_stage);

// (E_AC - E_TACT) / E_AC over cumulative energies.
double improvement(const RunHistory& tact_history, const RunHistory& ac_history,
                   std::size_t upto_stage);

// KL divergence in nats with additive smoothing 1e-9 and renormalization of
// both operands.
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

// Empirical visitation frequency of state integers over the 2^n_bs support.
std::vector<double> task_state_distribution(const RunHistory& history);

}  // namespace tactsim
