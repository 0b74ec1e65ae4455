#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tactsim/common.hpp"

namespace tactsim {

// Step-size and transfer-rate schedules. alpha(k)=1/k, beta(k)=1/(k ln k)
// with beta(1)=1, zeta(k)=theta^k with zeta(0)=1.
struct Schedules {
    double theta = 0.2;

    static double alpha(std::uint64_t k);
    static double beta(std::uint64_t k);
    double zeta(std::uint64_t k) const;
};

struct HyperParams {
    double temperature = 1000.0;      // tau > 0
    double discount = 0.001;          // gamma in [0,1)
    double transfer_theta = 0.2;      // theta in (0,1)
    double projection_bound = 1e5;    // p_t > 0
    double varsigma = 0.0;            // W/s, delay importance
    bool transfer_enabled = false;    // zeta == 0 when false
    double value_init = 0.0;          // V0
};

// Sparse tabular state: values, native/exotic/overall policies and visit
// counters. Absent entries read as their initial values; for the overall
// policy that is the projection of the zeta(0)-blend, i.e. clip(p_e) when
// transfer is enabled and 0 otherwise.
class LearnerTables {
public:
    explicit LearnerTables(double value_init = 0.0) : value_init_(value_init) {}

    static std::uint64_t key(std::uint32_t state, std::uint32_t action) {
        return (static_cast<std::uint64_t>(state) << 32) | action;
    }

    double value(std::uint32_t s) const;
    double native(std::uint32_t s, std::uint32_t a) const;
    double exotic(std::uint32_t s, std::uint32_t a) const;
    double overall(std::uint32_t s, std::uint32_t a, const HyperParams& hp) const;
    std::uint64_t state_visits(std::uint32_t s) const;
    std::uint64_t pair_visits(std::uint32_t s, std::uint32_t a) const;

    void set_exotic(std::uint32_t s, std::uint32_t a, double v);
    const std::unordered_map<std::uint64_t, double>& native_entries() const { return p_n_; }
    const std::unordered_map<std::uint64_t, double>& overall_entries() const { return p_o_; }
    const std::unordered_map<std::uint32_t, std::uint64_t>& state_counts() const { return nu1_; }
    const std::unordered_map<std::uint64_t, std::uint64_t>& pair_counts() const { return nu2_; }

    friend void update_value(LearnerTables&, std::uint32_t, double);
    friend void update_native_policy(LearnerTables&, std::uint32_t, std::uint32_t, double);
    friend void tact_update(LearnerTables&, std::uint32_t, std::uint32_t, double, double);

private:
    double value_init_ = 0.0;
    std::unordered_map<std::uint32_t, double> v_;
    std::unordered_map<std::uint64_t, double> p_n_;
    std::unordered_map<std::uint64_t, double> p_e_;
    std::unordered_map<std::uint64_t, double> p_o_;
    std::unordered_map<std::uint32_t, std::uint64_t> nu1_;
    std::unordered_map<std::uint64_t, std::uint64_t> nu2_;
};

// Boltzmann strategy over a row of policy values, max-subtracted for
// numerical stability. Probabilities are all positive and sum to 1.
std::vector<double> strategy_probabilities(const std::vector<double>& policy_row, double temperature);

// Samples an action id from the Boltzmann strategy over the full action
// space {0,1}^n_bs via inverse CDF in action-integer order.
std::uint32_t select_action(std::uint32_t state, const LearnerTables& tables,
                            const HyperParams& hp, int n_bs, RngStream& rng);

// One-step TD error: cost + gamma*V(s') - V(s).
double td_error(double cost, double v_next, double v_curr, double discount);

// nu1 is incremented first; V(s) += alpha(nu1)*delta.
void update_value(LearnerTables& tables, std::uint32_t state, double delta);

// nu2 is incremented first; p_n(s,a) -= beta(nu2)*delta.
void update_native_policy(LearnerTables& tables, std::uint32_t state, std::uint32_t action,
                          double delta);

// Overall policy blend with Euclidean projection onto [-p_t, p_t].
// zeta_k must be the transfer rate evaluated at the pre-increment pair count.
void tact_update(LearnerTables& tables, std::uint32_t state, std::uint32_t action,
                 double zeta_k, double projection_bound);

// Serialized learned policy. Text format, one record per materialized native
// policy entry; round trips bit-exactly.
struct PolicySnapshot {
    int version = 1;
    int n_bs = 0;
    std::uint64_t stages = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    // sorted by (state, action) for deterministic output
    std::vector<std::pair<std::uint64_t, double>> entries;
};

PolicySnapshot export_policy(const LearnerTables& tables, int n_bs, std::uint64_t stages,
                             std::uint64_t seed, std::uint64_t config_hash);

// Loads a snapshot into the exotic policy table. Throws ConfigError when the
// BS count does not match.
void import_policy(const PolicySnapshot& snapshot, int n_bs, LearnerTables& tables);

std::string serialize_policy(const PolicySnapshot& snapshot);
PolicySnapshot parse_policy(const std::string& text);
void save_policy(const PolicySnapshot& snapshot, const std::string& path);
PolicySnapshot load_policy(const std::string& path);

}  // namespace tactsim
