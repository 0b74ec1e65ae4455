#include "tactsim/radio.hpp"

#include <cmath>
#include <limits>

namespace tactsim {

double path_loss_db(const BaseStation& bs, double x_m, double y_m, const ChannelParams& ch) {
    double dx = x_m - bs.x_m;
    double dy = y_m - bs.y_m;
    double d_m = std::sqrt(dx * dx + dy * dy);
    if (d_m < 1.0) d_m = 1.0;
    double d_km = d_m / 1000.0;
    double f = ch.carrier_freq_mhz;
    double log_f = std::log10(f);
    double log_hb = std::log10(bs.height_m);
    double a_hm = (1.1 * log_f - 0.7) * ch.mobile_height_m - (1.56 * log_f - 0.8);
    constexpr double kUrbanCorrectionDb = 3.0;
    return 46.3 + 33.9 * log_f - 13.82 * log_hb - a_hm +
           (44.9 - 6.55 * log_hb) * std::log10(d_km) + kUrbanCorrectionDb;
}

double rx_power_w(const BaseStation& bs, double x_m, double y_m, const ChannelParams& ch) {
    return bs.max_tx_power_w * std::pow(10.0, -path_loss_db(bs, x_m, y_m, ch) / 10.0);
}

namespace {

double rate_from_rx(double own_rx, double total_rx_active, const ChannelParams& ch) {
    double interference = ch.interference_factor * (total_rx_active - own_rx);
    double sinr = own_rx / (ch.noise_floor_w + interference);
    return ch.bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace

double transmission_rate(const std::vector<BaseStation>& roster, int bs_index,
                         double x_m, double y_m, std::uint32_t active_mask,
                         const ChannelParams& ch) {
    double total = 0.0;
    for (std::size_t j = 0; j < roster.size(); ++j)
        if ((active_mask >> j) & 1u) total += rx_power_w(roster[j], x_m, y_m, ch);
    double own = rx_power_w(roster[static_cast<std::size_t>(bs_index)], x_m, y_m, ch);
    return rate_from_rx(own, total, ch);
}

double system_load_density(const CellTraffic& cell, double rate_bps) {
    if (rate_bps <= 0.0) throw std::invalid_argument("system_load_density: rate must be positive");
    return traffic_load_density(cell) / rate_bps;
}

std::vector<std::int32_t> associate(const RegionGrid& grid,
                                    const std::vector<BaseStation>& roster,
                                    std::uint32_t active_mask,
                                    const std::vector<double>& prev_loads,
                                    double varsigma, const ChannelParams& ch) {
    if (active_mask == 0) throw std::invalid_argument("associate: active set is empty");
    int n = static_cast<int>(roster.size());
    std::vector<double> weight(roster.size());
    for (int j = 0; j < n; ++j) {
        if (((active_mask >> j) & 1u) == 0) continue;
        double denom = (1.0 - roster[static_cast<std::size_t>(j)].constant_fraction) *
                       roster[static_cast<std::size_t>(j)].max_op_power_w;
        if (varsigma > 0.0) {
            double margin = 1.0 - prev_loads[static_cast<std::size_t>(j)];
            denom += varsigma / (margin * margin);
        }
        weight[static_cast<std::size_t>(j)] = 1.0 / denom;
    }

    std::vector<std::int32_t> assoc(static_cast<std::size_t>(grid.cell_count()), -1);
    for (int c = 0; c < grid.cell_count(); ++c) {
        double x, y;
        grid.cell_center(c, x, y);
        double total = 0.0;
        for (int j = 0; j < n; ++j)
            if ((active_mask >> j) & 1u) total += rx_power_w(roster[static_cast<std::size_t>(j)], x, y, ch);
        double best_metric = -1.0;
        std::int32_t best = -1;
        for (int j = 0; j < n; ++j) {
            if (((active_mask >> j) & 1u) == 0) continue;
            double own = rx_power_w(roster[static_cast<std::size_t>(j)], x, y, ch);
            double metric = rate_from_rx(own, total, ch) * weight[static_cast<std::size_t>(j)];
            if (metric > best_metric) {
                best_metric = metric;
                best = static_cast<std::int32_t>(j);
            }
        }
        assoc[static_cast<std::size_t>(c)] = best;
    }
    return assoc;
}

std::vector<double> compute_loads(const RegionGrid& grid,
                                  const std::vector<BaseStation>& roster,
                                  const std::vector<std::int32_t>& assoc,
                                  std::uint32_t active_mask, const ChannelParams& ch) {
    std::vector<double> loads(roster.size(), 0.0);
    for (int c = 0; c < grid.cell_count(); ++c) {
        std::int32_t bs = assoc[static_cast<std::size_t>(c)];
        if (bs < 0) continue;
        if (((active_mask >> bs) & 1u) == 0)
            throw std::invalid_argument("compute_loads: association references a sleeping BS");
        double x, y;
        grid.cell_center(c, x, y);
        double rate = transmission_rate(roster, bs, x, y, active_mask, ch);
        loads[static_cast<std::size_t>(bs)] +=
            system_load_density(grid.cells[static_cast<std::size_t>(c)], rate) * grid.cell_area(c);
    }
    return loads;
}

bool is_feasible(const std::vector<double>& loads) {
    for (double rho : loads)
        if (!(rho < 1.0)) return false;
    return true;
}

double energy_cost(const std::vector<double>& loads, std::uint32_t active_mask,
                   const std::vector<BaseStation>& roster) {
    double e = 0.0;
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (((active_mask >> i) & 1u) == 0) continue;
        const auto& bs = roster[i];
        e += (1.0 - bs.constant_fraction) * loads[i] * bs.max_op_power_w +
             bs.constant_fraction * bs.max_op_power_w;
    }
    return e;
}

double delay_cost(const std::vector<double>& loads, std::uint32_t active_mask) {
    double d = 0.0;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        if (((active_mask >> i) & 1u) == 0) continue;
        if (!(loads[i] < 1.0)) throw std::logic_error("delay_cost: load >= 1 (gate with is_feasible)");
        d += loads[i] / (1.0 - loads[i]);
    }
    return d;
}

double total_cost(double energy_w, double delay_flows, double varsigma) {
    return energy_w + varsigma * delay_flows;
}

CostBreakdown make_cost(const std::vector<double>& loads, std::uint32_t active_mask,
                        const std::vector<BaseStation>& roster, double varsigma) {
    CostBreakdown cb;
    cb.varsigma = varsigma;
    cb.energy_w = energy_cost(loads, active_mask, roster);
    cb.delay_flows = delay_cost(loads, active_mask);
    cb.total = total_cost(cb.energy_w, cb.delay_flows, varsigma);
    return cb;
}

RadioMap::RadioMap(const RegionGrid& grid, const std::vector<BaseStation>& roster,
                   const ChannelParams& ch)
    : n_bs_(static_cast<int>(roster.size())), n_cells_(grid.cell_count()) {
    rx_.resize(static_cast<std::size_t>(n_bs_) * n_cells_);
    for (int b = 0; b < n_bs_; ++b) {
        for (int c = 0; c < n_cells_; ++c) {
            double x, y;
            grid.cell_center(c, x, y);
            rx_[static_cast<std::size_t>(b) * n_cells_ + c] =
                rx_power_w(roster[static_cast<std::size_t>(b)], x, y, ch);
        }
    }
}

void RadioMap::rates_for_mask(std::uint32_t active_mask, const ChannelParams& ch,
                              std::vector<double>& out) const {
    out.resize(static_cast<std::size_t>(n_bs_) * n_cells_);
    std::vector<double> total(static_cast<std::size_t>(n_cells_), 0.0);
    for (int b = 0; b < n_bs_; ++b) {
        if (((active_mask >> b) & 1u) == 0) continue;
        const double* row = &rx_[static_cast<std::size_t>(b) * n_cells_];
        for (int c = 0; c < n_cells_; ++c) total[static_cast<std::size_t>(c)] += row[c];
    }
    for (int b = 0; b < n_bs_; ++b) {
        if (((active_mask >> b) & 1u) == 0) continue;
        const double* row = &rx_[static_cast<std::size_t>(b) * n_cells_];
        double* orow = &out[static_cast<std::size_t>(b) * n_cells_];
        for (int c = 0; c < n_cells_; ++c)
            orow[c] = rate_from_rx(row[c], total[static_cast<std::size_t>(c)], ch);
    }
}

}  // namespace tactsim
