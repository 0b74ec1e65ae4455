#include "tactsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tactsim {

using nlohmann::json;

std::vector<BaseStation> default_roster() {
    std::vector<BaseStation> r;
    auto macro = [](int id, double x, double y) {
        return BaseStation{id, BsKind::Macro, x, y, 32.0, 20.0, 865.0, 0.5};
    };
    auto micro = [](int id, double x, double y) {
        return BaseStation{id, BsKind::Micro, x, y, 12.5, 1.0, 38.0, 0.5};
    };
    r.push_back(macro(0, 500.0, 500.0));
    r.push_back(macro(1, 1500.0, 500.0));
    r.push_back(macro(2, 1000.0, 1000.0));
    r.push_back(macro(3, 500.0, 1500.0));
    r.push_back(macro(4, 1500.0, 1500.0));
    r.push_back(micro(5, 250.0, 1000.0));
    r.push_back(micro(6, 1000.0, 250.0));
    r.push_back(micro(7, 1750.0, 1000.0));
    r.push_back(micro(8, 1000.0, 1750.0));
    r.push_back(micro(9, 1000.0, 600.0));
    return r;
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Tact: return "tact";
        case Scheme::Ac: return "ac";
        case Scheme::Sota: return "sota";
        case Scheme::AllOn: return "all_on";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "tact") return Scheme::Tact;
    if (name == "ac") return Scheme::Ac;
    if (name == "sota") return Scheme::Sota;
    if (name == "all_on") return Scheme::AllOn;
    throw ConfigError("unknown scheme: " + name + " (expected tact|ac|sota|all_on)");
}

std::vector<BaseStation> RunConfig::effective_roster() const {
    std::vector<BaseStation> roster =
        network.base_stations.empty() ? default_roster() : network.base_stations;
    if (!network.roster_ids.empty()) {
        std::vector<BaseStation> filtered;
        for (const auto& bs : roster)
            if (std::find(network.roster_ids.begin(), network.roster_ids.end(), bs.id) !=
                network.roster_ids.end())
                filtered.push_back(bs);
        if (filtered.size() != network.roster_ids.size())
            throw ConfigError("roster_ids references unknown BS ids");
        roster = std::move(filtered);
    }
    std::sort(roster.begin(), roster.end(),
              [](const BaseStation& a, const BaseStation& b) { return a.id < b.id; });
    return roster;
}

TrafficField RunConfig::make_traffic_field() const {
    RegionGrid grid = make_grid(traffic.region_width_m, traffic.region_height_m, traffic.cell_size_m);
    TemporalProfile profile;
    profile.kind = traffic.profile;
    profile.lambda_mean = traffic.arrival_rate_per_m2_s;
    profile.lambda_var = traffic.lambda_var_per_m2_s;
    profile.period_stages = traffic.period_stages;
    profile.phase_stages = traffic.phase_stages;
    return TrafficField(std::move(grid), profile, traffic.mean_file_size_bits, traffic.hotspots,
                        traffic.noise_amplitude);
}

Environment RunConfig::make_environment() const {
    return Environment(make_traffic_field(), effective_roster(), network.channel,
                       learner.varsigma_w_s);
}

namespace {

void require_keys(const json& j, const char* section, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k))
            throw ConfigError(std::string("unknown key '") + k + "' in section " + section);
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json traffic_to_json(const TrafficConfig& t) {
    json j;
    j["region_width_m"] = t.region_width_m;
    j["region_height_m"] = t.region_height_m;
    j["cell_size_m"] = t.cell_size_m;
    j["arrival_rate_per_m2_s"] = t.arrival_rate_per_m2_s;
    j["mean_file_size_bits"] = t.mean_file_size_bits;
    j["profile"] = t.profile == ProfileKind::Static ? "static" : "sinusoidal";
    j["lambda_var_per_m2_s"] = t.lambda_var_per_m2_s;
    j["period_stages"] = t.period_stages;
    j["phase_stages"] = t.phase_stages;
    j["noise_amplitude"] = t.noise_amplitude;
    j["state_from_offered_traffic"] = t.state_from_offered_traffic;
    json hs = json::array();
    for (const auto& h : t.hotspots) {
        hs.push_back({{"x_min_m", h.x_min_m},
                      {"x_max_m", h.x_max_m},
                      {"y_min_m", h.y_min_m},
                      {"y_max_m", h.y_max_m},
                      {"multiplier", h.multiplier}});
    }
    j["hotspots"] = hs;
    return j;
}

json network_to_json(const NetworkConfig& n) {
    json j;
    j["bandwidth_hz"] = n.channel.bandwidth_hz;
    j["carrier_freq_mhz"] = n.channel.carrier_freq_mhz;
    j["interference_factor"] = n.channel.interference_factor;
    j["noise_floor_w"] = n.channel.noise_floor_w;
    j["mobile_height_m"] = n.channel.mobile_height_m;
    json bss = json::array();
    for (const auto& b : n.base_stations) {
        bss.push_back({{"id", b.id},
                       {"kind", b.kind == BsKind::Macro ? "macro" : "micro"},
                       {"x_m", b.x_m},
                       {"y_m", b.y_m},
                       {"height_m", b.height_m},
                       {"max_tx_power_w", b.max_tx_power_w},
                       {"max_op_power_w", b.max_op_power_w},
                       {"constant_fraction", b.constant_fraction}});
    }
    j["base_stations"] = bss;
    j["roster_ids"] = n.roster_ids;
    return j;
}

json learner_to_json(const LearnerConfig& l) {
    json j;
    j["scheme"] = scheme_name(l.scheme);
    j["temperature"] = l.temperature;
    j["discount"] = l.discount;
    j["transfer_theta"] = l.transfer_theta;
    j["projection_bound"] = l.projection_bound;
    j["varsigma_w_s"] = l.varsigma_w_s;
    j["stages"] = l.stages;
    j["seed"] = l.seed;
    j["transfer_snapshot"] = l.transfer_snapshot;
    j["zeta_zero_override"] = l.zeta_zero_override;
    j["value_init"] = l.value_init;
    return j;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["traffic"] = traffic_to_json(cfg.traffic);
    j["network"] = network_to_json(cfg.network);
    j["learner"] = learner_to_json(cfg.learner);
    j["output"] = {{"checkpoints", cfg.output.checkpoints}};
    return j;
}

TrafficConfig traffic_from_json(const json& j) {
    require_keys(j, "traffic",
                 {"region_width_m", "region_height_m", "cell_size_m", "arrival_rate_per_m2_s",
                  "mean_file_size_bits", "profile", "lambda_var_per_m2_s", "period_stages",
                  "phase_stages", "noise_amplitude", "state_from_offered_traffic", "hotspots"});
    TrafficConfig t;
    read_if(j, "region_width_m", t.region_width_m);
    read_if(j, "region_height_m", t.region_height_m);
    read_if(j, "cell_size_m", t.cell_size_m);
    read_if(j, "arrival_rate_per_m2_s", t.arrival_rate_per_m2_s);
    read_if(j, "mean_file_size_bits", t.mean_file_size_bits);
    if (j.contains("profile")) {
        std::string p = j.at("profile").get<std::string>();
        if (p == "static")
            t.profile = ProfileKind::Static;
        else if (p == "sinusoidal")
            t.profile = ProfileKind::Sinusoidal;
        else
            throw ConfigError("unknown traffic profile: " + p);
    }
    read_if(j, "lambda_var_per_m2_s", t.lambda_var_per_m2_s);
    read_if(j, "period_stages", t.period_stages);
    read_if(j, "phase_stages", t.phase_stages);
    read_if(j, "noise_amplitude", t.noise_amplitude);
    read_if(j, "state_from_offered_traffic", t.state_from_offered_traffic);
    if (j.contains("hotspots")) {
        for (const auto& hj : j.at("hotspots")) {
            require_keys(hj, "traffic.hotspots",
                         {"x_min_m", "x_max_m", "y_min_m", "y_max_m", "multiplier"});
            HotspotRect h;
            read_if(hj, "x_min_m", h.x_min_m);
            read_if(hj, "x_max_m", h.x_max_m);
            read_if(hj, "y_min_m", h.y_min_m);
            read_if(hj, "y_max_m", h.y_max_m);
            read_if(hj, "multiplier", h.multiplier);
            t.hotspots.push_back(h);
        }
    }
    return t;
}

NetworkConfig network_from_json(const json& j) {
    require_keys(j, "network",
                 {"bandwidth_hz", "carrier_freq_mhz", "interference_factor", "noise_floor_w",
                  "mobile_height_m", "base_stations", "roster_ids"});
    NetworkConfig n;
    read_if(j, "bandwidth_hz", n.channel.bandwidth_hz);
    read_if(j, "carrier_freq_mhz", n.channel.carrier_freq_mhz);
    read_if(j, "interference_factor", n.channel.interference_factor);
    read_if(j, "noise_floor_w", n.channel.noise_floor_w);
    read_if(j, "mobile_height_m", n.channel.mobile_height_m);
    if (j.contains("base_stations")) {
        for (const auto& bj : j.at("base_stations")) {
            require_keys(bj, "network.base_stations",
                         {"id", "kind", "x_m", "y_m", "height_m", "max_tx_power_w",
                          "max_op_power_w", "constant_fraction"});
            BaseStation b;
            read_if(bj, "id", b.id);
            if (bj.contains("kind")) {
                std::string k = bj.at("kind").get<std::string>();
                if (k == "macro")
                    b.kind = BsKind::Macro;
                else if (k == "micro")
                    b.kind = BsKind::Micro;
                else
                    throw ConfigError("unknown BS kind: " + k);
            }
            read_if(bj, "x_m", b.x_m);
            read_if(bj, "y_m", b.y_m);
            read_if(bj, "height_m", b.height_m);
            read_if(bj, "max_tx_power_w", b.max_tx_power_w);
            read_if(bj, "max_op_power_w", b.max_op_power_w);
            read_if(bj, "constant_fraction", b.constant_fraction);
            n.base_stations.push_back(b);
        }
    }
    if (j.contains("roster_ids")) n.roster_ids = j.at("roster_ids").get<std::vector<int>>();
    return n;
}

LearnerConfig learner_from_json(const json& j) {
    require_keys(j, "learner",
                 {"scheme", "temperature", "discount", "transfer_theta", "projection_bound",
                  "varsigma_w_s", "stages", "seed", "transfer_snapshot", "zeta_zero_override",
                  "value_init"});
    LearnerConfig l;
    if (j.contains("scheme")) l.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    read_if(j, "temperature", l.temperature);
    read_if(j, "discount", l.discount);
    read_if(j, "transfer_theta", l.transfer_theta);
    read_if(j, "projection_bound", l.projection_bound);
    read_if(j, "varsigma_w_s", l.varsigma_w_s);
    read_if(j, "stages", l.stages);
    read_if(j, "seed", l.seed);
    read_if(j, "transfer_snapshot", l.transfer_snapshot);
    read_if(j, "zeta_zero_override", l.zeta_zero_override);
    read_if(j, "value_init", l.value_init);
    return l;
}

RunConfig config_from_json(const json& j) {
    require_keys(j, "(top level)", {"traffic", "network", "learner", "output"});
    RunConfig cfg;
    if (j.contains("traffic")) cfg.traffic = traffic_from_json(j.at("traffic"));
    if (j.contains("network")) cfg.network = network_from_json(j.at("network"));
    if (j.contains("learner")) cfg.learner = learner_from_json(j.at("learner"));
    if (j.contains("output")) {
        require_keys(j.at("output"), "output", {"checkpoints"});
        if (j.at("output").contains("checkpoints"))
            cfg.output.checkpoints = j.at("output").at("checkpoints").get<std::vector<long>>();
    }
    cfg.validate();
    return cfg;
}

}  // namespace

void RunConfig::validate() const {
    if (traffic.region_width_m <= 0.0 || traffic.region_height_m <= 0.0 ||
        traffic.cell_size_m <= 0.0)
        throw ConfigError("region dimensions and cell size must be positive");
    if (traffic.arrival_rate_per_m2_s < 0.0) throw ConfigError("arrival rate must be >= 0");
    if (traffic.mean_file_size_bits <= 0.0) throw ConfigError("mean file size must be positive");
    if (traffic.profile == ProfileKind::Sinusoidal) {
        if (traffic.period_stages < 1) throw ConfigError("sinusoidal period must be >= 1");
        if (traffic.lambda_var_per_m2_s < 0.0 ||
            traffic.arrival_rate_per_m2_s < traffic.lambda_var_per_m2_s)
            throw ConfigError("sinusoidal profile requires lambda_mean >= lambda_var >= 0");
    }
    if (traffic.noise_amplitude < 0.0 || traffic.noise_amplitude >= 1.0)
        throw ConfigError("noise amplitude must lie in [0, 1)");
    for (const auto& h : traffic.hotspots) {
        if (h.multiplier < 0.0) throw ConfigError("hotspot multiplier must be >= 0");
        if (h.x_max_m < h.x_min_m || h.y_max_m < h.y_min_m)
            throw ConfigError("hotspot rectangle is inverted");
    }

    if (network.channel.bandwidth_hz <= 0.0) throw ConfigError("bandwidth must be positive");
    if (network.channel.interference_factor < 0.0 || network.channel.interference_factor > 1.0)
        throw ConfigError("interference factor must lie in [0, 1]");
    if (network.channel.noise_floor_w < 0.0) throw ConfigError("noise floor must be >= 0");
    if (network.channel.carrier_freq_mhz <= 0.0) throw ConfigError("carrier frequency must be positive");

    std::vector<BaseStation> roster = effective_roster();
    if (roster.empty()) throw ConfigError("roster is empty");
    if (roster.size() > 12)
        throw ConfigError("at most 12 BSs are supported (full 2^N action enumeration)");
    std::set<int> ids;
    for (const auto& b : roster) {
        if (!ids.insert(b.id).second) throw ConfigError("duplicate BS id " + std::to_string(b.id));
        if (b.max_tx_power_w <= 0.0 || b.max_op_power_w <= 0.0)
            throw ConfigError("BS powers must be positive");
        if (b.constant_fraction <= 0.0 || b.constant_fraction >= 1.0)
            throw ConfigError("constant power fraction must lie in (0, 1)");
        if (b.height_m <= 0.0) throw ConfigError("BS height must be positive");
        if (b.x_m < 0.0 || b.x_m > traffic.region_width_m || b.y_m < 0.0 ||
            b.y_m > traffic.region_height_m)
            throw ConfigError("BS " + std::to_string(b.id) + " lies outside the region");
    }

    if (learner.temperature <= 0.0) throw ConfigError("temperature must be positive");
    if (learner.discount < 0.0 || learner.discount >= 1.0)
        throw ConfigError("discount must lie in [0, 1)");
    if (learner.transfer_theta <= 0.0 || learner.transfer_theta >= 1.0)
        throw ConfigError("transfer theta must lie in (0, 1)");
    if (learner.projection_bound <= 0.0) throw ConfigError("projection bound must be positive");
    if (learner.varsigma_w_s < 0.0) throw ConfigError("varsigma must be >= 0");
    if (learner.stages < 0) throw ConfigError("stage count must be >= 0");
    for (long c : output.checkpoints)
        if (c < 1) throw ConfigError("checkpoints must be >= 1");
}

std::uint64_t RunConfig::config_hash() const {
    return fnv1a64(config_to_json(*this).dump());
}

std::uint64_t RunConfig::traffic_hash() const {
    json j;
    j["traffic"] = traffic_to_json(traffic);
    j["network"] = network_to_json(network);
    return fnv1a64(j.dump());
}

RunConfig config_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const RunConfig& cfg) {
    return config_to_json(cfg).dump(2) + "\n";
}

SweepSpec sweep_from_json_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep spec is not valid JSON: ") + e.what());
    }
    try {
        require_keys(j, "(sweep)", {"base", "axis", "values", "seeds", "schemes"});
        SweepSpec spec;
        if (!j.contains("base") || !j.contains("axis") || !j.contains("values") ||
            !j.contains("seeds") || !j.contains("schemes"))
            throw ConfigError("sweep spec requires base, axis, values, seeds and schemes");
        spec.base = config_from_json(j.at("base"));
        spec.axis = j.at("axis").get<std::string>();
        spec.values = j.at("values").get<std::vector<double>>();
        spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        for (const auto& s : j.at("schemes"))
            spec.schemes.push_back(scheme_from_name(s.get<std::string>()));
        if (spec.values.empty() || spec.seeds.empty() || spec.schemes.empty())
            throw ConfigError("sweep spec lists must be non-empty");
        // every generated cell must validate
        for (double v : spec.values) (void)apply_axis(spec.base, spec.axis, v);
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sweep spec type error: ") + e.what());
    }
}

SweepSpec load_sweep(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read sweep spec: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return sweep_from_json_text(ss.str());
}

RunConfig apply_axis(const RunConfig& base, const std::string& axis, double value) {
    RunConfig cfg = base;
    if (axis == "network.constant_fraction_all") {
        std::vector<BaseStation> roster = cfg.effective_roster();
        for (auto& b : roster) b.constant_fraction = value;
        cfg.network.base_stations = roster;
        cfg.network.roster_ids.clear();
        cfg.validate();
        return cfg;
    }
    json j = config_to_json(cfg);
    json* node = &j;
    std::string rest = axis;
    while (true) {
        auto dot = rest.find('.');
        std::string head = rest.substr(0, dot);
        if (!node->contains(head)) throw ConfigError("unknown sweep axis: " + axis);
        if (dot == std::string::npos) {
            (*node)[head] = value;
            break;
        }
        node = &(*node)[head];
        rest = rest.substr(dot + 1);
    }
    return config_from_json(j);
}

}  // namespace tactsim
