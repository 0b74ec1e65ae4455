#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tactsim/environment.hpp"
#include "tactsim/radio.hpp"
#include "tactsim/traffic.hpp"

namespace tactsim {

struct TrafficConfig {
    double region_width_m = 2000.0;
    double region_height_m = 2000.0;
    double cell_size_m = 50.0;
    double arrival_rate_per_m2_s = 5e-6;  // lambda_mean
    double mean_file_size_bits = 8e5;     // 100 kbyte
    ProfileKind profile = ProfileKind::Static;
    double lambda_var_per_m2_s = 0.0;
    long period_stages = 24;
    long phase_stages = 0;
    double noise_amplitude = 0.0;
    bool state_from_offered_traffic = false;
    std::vector<HotspotRect> hotspots;
};

struct NetworkConfig {
    ChannelParams channel;
    std::vector<BaseStation> base_stations;  // empty -> default roster
    std::vector<int> roster_ids;             // optional filter by BS id
};

struct LearnerConfig {
    Scheme scheme = Scheme::Tact;
    double temperature = 1000.0;
    double discount = 0.001;
    double transfer_theta = 0.2;
    double projection_bound = 1e5;
    double varsigma_w_s = 0.0;
    long stages = 1500;
    std::uint64_t seed = 1;
    std::string transfer_snapshot;  // path; empty means all-zero exotic policy
    bool zeta_zero_override = false;
    double value_init = 0.0;
};

struct OutputConfig {
    std::vector<long> checkpoints = {100, 300, 500, 1000, 1500};
};

struct RunConfig {
    TrafficConfig traffic;
    NetworkConfig network;
    LearnerConfig learner;
    OutputConfig output;

    // roster after defaults and the roster_ids filter, sorted by id
    std::vector<BaseStation> effective_roster() const;
    int n_bs() const { return static_cast<int>(effective_roster().size()); }

    TrafficField make_traffic_field() const;
    Environment make_environment() const;

    std::uint64_t config_hash() const;   // whole config, canonical form
    std::uint64_t traffic_hash() const;  // traffic + network sections only

    // throws ConfigError on any violated invariant
    void validate() const;
};

std::vector<BaseStation> default_roster();

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

RunConfig config_from_json_text(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json_text(const RunConfig& cfg);

struct SweepSpec {
    RunConfig base;
    std::string axis;  // dotted path, e.g. traffic.arrival_rate_per_m2_s
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    std::vector<Scheme> schemes;
};

SweepSpec sweep_from_json_text(const std::string& json_text);
SweepSpec load_sweep(const std::string& path);

// Applies one axis value to a copy of the base config. The special axis
// network.constant_fraction_all writes every roster entry's q.
RunConfig apply_axis(const RunConfig& base, const std::string& axis, double value);

}  // namespace tactsim
