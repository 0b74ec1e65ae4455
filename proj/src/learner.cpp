#include "tactsim/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace tactsim {

double Schedules::alpha(std::uint64_t k) {
    return 1.0 / static_cast<double>(k);
}

double Schedules::beta(std::uint64_t k) {
    if (k <= 1) return 1.0;  // 1/(k ln k) is undefined at k=1
    double kd = static_cast<double>(k);
    return 1.0 / (kd * std::log(kd));
}

double Schedules::zeta(std::uint64_t k) const {
    return std::pow(theta, static_cast<double>(k));
}

double LearnerTables::value(std::uint32_t s) const {
    auto it = v_.find(s);
    return it == v_.end() ? value_init_ : it->second;
}

double LearnerTables::native(std::uint32_t s, std::uint32_t a) const {
    auto it = p_n_.find(key(s, a));
    return it == p_n_.end() ? 0.0 : it->second;
}

double LearnerTables::exotic(std::uint32_t s, std::uint32_t a) const {
    auto it = p_e_.find(key(s, a));
    return it == p_e_.end() ? 0.0 : it->second;
}

double LearnerTables::overall(std::uint32_t s, std::uint32_t a, const HyperParams& hp) const {
    auto it = p_o_.find(key(s, a));
    if (it != p_o_.end()) return it->second;
    // never executed: zeta(0)=1 blend, so the exotic policy dominates at
    // first touch; without transfer this is just the native default.
    double blended = hp.transfer_enabled ? exotic(s, a) : 0.0;
    return clamp_interval(blended, -hp.projection_bound, hp.projection_bound);
}

std::uint64_t LearnerTables::state_visits(std::uint32_t s) const {
    auto it = nu1_.find(s);
    return it == nu1_.end() ? 0 : it->second;
}

std::uint64_t LearnerTables::pair_visits(std::uint32_t s, std::uint32_t a) const {
    auto it = nu2_.find(key(s, a));
    return it == nu2_.end() ? 0 : it->second;
}

void LearnerTables::set_exotic(std::uint32_t s, std::uint32_t a, double v) {
    p_e_[key(s, a)] = v;
}

std::vector<double> strategy_probabilities(const std::vector<double>& policy_row,
                                           double temperature) {
    if (temperature <= 0.0) throw std::invalid_argument("temperature must be positive");
    double max_p = *std::max_element(policy_row.begin(), policy_row.end());
    std::vector<double> probs(policy_row.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < policy_row.size(); ++i) {
        // floor keeps every probability strictly positive even when the gap
        // underflows exp
        probs[i] = std::max(std::exp((policy_row[i] - max_p) / temperature),
                            std::numeric_limits<double>::min());
        sum += probs[i];
    }
    for (double& p : probs) p /= sum;
    return probs;
}

std::uint32_t select_action(std::uint32_t state, const LearnerTables& tables,
                            const HyperParams& hp, int n_bs, RngStream& rng) {
    std::uint32_t n_actions = 1u << n_bs;
    std::vector<double> row(n_actions);
    for (std::uint32_t a = 0; a < n_actions; ++a) row[a] = tables.overall(state, a, hp);
    std::vector<double> probs = strategy_probabilities(row, hp.temperature);
    double u = rng.next_unit();
    double cum = 0.0;
    for (std::uint32_t a = 0; a < n_actions; ++a) {
        cum += probs[a];
        if (u < cum) return a;
    }
    return n_actions - 1;
}

double td_error(double cost, double v_next, double v_curr, double discount) {
    return cost + discount * v_next - v_curr;
}

void update_value(LearnerTables& tables, std::uint32_t state, double delta) {
    std::uint64_t& n = tables.nu1_[state];
    n += 1;
    auto [it, inserted] = tables.v_.try_emplace(state, tables.value_init_);
    it->second += Schedules::alpha(n) * delta;
}

void update_native_policy(LearnerTables& tables, std::uint32_t state, std::uint32_t action,
                          double delta) {
    std::uint64_t k = LearnerTables::key(state, action);
    std::uint64_t& n = tables.nu2_[k];
    n += 1;
    tables.p_n_[k] -= Schedules::beta(n) * delta;
}

void tact_update(LearnerTables& tables, std::uint32_t state, std::uint32_t action,
                 double zeta_k, double projection_bound) {
    std::uint64_t k = LearnerTables::key(state, action);
    double blended = (1.0 - zeta_k) * tables.native(state, action) +
                     zeta_k * tables.exotic(state, action);
    tables.p_o_[k] = clamp_interval(blended, -projection_bound, projection_bound);
}

PolicySnapshot export_policy(const LearnerTables& tables, int n_bs, std::uint64_t stages,
                             std::uint64_t seed, std::uint64_t config_hash) {
    PolicySnapshot snap;
    snap.n_bs = n_bs;
    snap.stages = stages;
    snap.seed = seed;
    snap.config_hash = config_hash;
    snap.entries.assign(tables.native_entries().begin(), tables.native_entries().end());
    std::sort(snap.entries.begin(), snap.entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return snap;
}

void import_policy(const PolicySnapshot& snapshot, int n_bs, LearnerTables& tables) {
    if (snapshot.n_bs != n_bs)
        throw ConfigError("policy snapshot BS count " + std::to_string(snapshot.n_bs) +
                          " does not match configured " + std::to_string(n_bs));
    for (const auto& [k, v] : snapshot.entries) {
        tables.set_exotic(static_cast<std::uint32_t>(k >> 32),
                          static_cast<std::uint32_t>(k & 0xffffffffu), v);
    }
}

std::string serialize_policy(const PolicySnapshot& snapshot) {
    std::ostringstream out;
    out << "tactsim-policy v" << snapshot.version << " n_bs=" << snapshot.n_bs
        << " stages=" << snapshot.stages << " seed=" << snapshot.seed << " config_hash=" << std::hex
        << snapshot.config_hash << std::dec << "\n";
    char buf[64];
    for (const auto& [k, v] : snapshot.entries) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << (k >> 32) << ' ' << (k & 0xffffffffu) << ' ' << buf << "\n";
    }
    return out.str();
}

PolicySnapshot parse_policy(const std::string& text) {
    PolicySnapshot snap;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("policy snapshot: empty input");
    {
        std::istringstream hdr(line);
        std::string magic, vtag;
        hdr >> magic >> vtag;
        if (magic != "tactsim-policy" || vtag.size() < 2 || vtag[0] != 'v')
            throw IoError("policy snapshot: bad header");
        snap.version = std::stoi(vtag.substr(1));
        if (snap.version != 1) throw IoError("policy snapshot: unsupported version " + vtag);
        std::string field;
        while (hdr >> field) {
            auto eq = field.find('=');
            if (eq == std::string::npos) throw IoError("policy snapshot: malformed header field " + field);
            std::string name = field.substr(0, eq);
            std::string value = field.substr(eq + 1);
            if (name == "n_bs")
                snap.n_bs = std::stoi(value);
            else if (name == "stages")
                snap.stages = std::stoull(value);
            else if (name == "seed")
                snap.seed = std::stoull(value);
            else if (name == "config_hash")
                snap.config_hash = std::stoull(value, nullptr, 16);
            else
                throw IoError("policy snapshot: unknown header field " + name);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream rec(line);
        std::uint64_t state, action;
        std::string value;
        if (!(rec >> state >> action >> value))
            throw IoError("policy snapshot: malformed record: " + line);
        snap.entries.emplace_back((state << 32) | action, std::strtod(value.c_str(), nullptr));
    }
    return snap;
}

void save_policy(const PolicySnapshot& snapshot, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write policy snapshot: " + path);
    out << serialize_policy(snapshot);
    if (!out) throw IoError("write failed: " + path);
}

PolicySnapshot load_policy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read policy snapshot: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_policy(ss.str());
}

}  // namespace tactsim
