#include "tactsim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace tactsim {

namespace {

double cumulative_energy(const RunHistory& h, std::size_t upto_stage) {
    if (h.records.size() < upto_stage)
        throw std::invalid_argument("history shorter than requested stage range");
    double sum = 0.0;
    for (std::size_t i = 0; i < upto_stage; ++i) sum += h.records[i].energy_w;
    return sum;
}

}  // namespace

double cecr(const RunHistory& scheme_history, const RunHistory& all_on_history,
            std::size_t upto_stage) {
    if (scheme_history.traffic_hash != all_on_history.traffic_hash ||
        scheme_history.seed != all_on_history.seed)
        throw std::invalid_argument("cecr: histories come from different traffic realizations");
    double denom = cumulative_energy(all_on_history, upto_stage);
    double num = cumulative_energy(scheme_history, upto_stage);
    return num / denom;
}

double improvement(const RunHistory& tact_history, const RunHistory& ac_history,
                   std::size_t upto_stage) {
    double e_ac = cumulative_energy(ac_history, upto_stage);
    if (e_ac == 0.0) throw std::invalid_argument("improvement: AC cumulative energy is zero");
    double e_tact = cumulative_energy(tact_history, upto_stage);
    return (e_ac - e_tact) / e_ac;
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("kl_divergence: dimension mismatch");
    constexpr double kSmoothing = 1e-9;
    double sp = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sp += p[i] + kSmoothing;
        sq += q[i] + kSmoothing;
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double pi = (p[i] + kSmoothing) / sp;
        double qi = (q[i] + kSmoothing) / sq;
        kl += pi * std::log(pi / qi);
    }
    return kl;
}

std::vector<double> task_state_distribution(const RunHistory& history) {
    if (history.records.empty())
        throw std::invalid_argument("task_state_distribution: empty history");
    std::vector<double> dist(static_cast<std::size_t>(1u) << history.n_bs, 0.0);
    for (const auto& rec : history.records) dist[rec.state] += 1.0;
    double n = static_cast<double>(history.records.size());
    for (double& d : dist) d /= n;
    return dist;
}

}  // namespace tactsim
