#pragma once

#include <cstdint>
#include <vector>

#include "tactsim/common.hpp"
#include "tactsim/traffic.hpp"

namespace tactsim {

enum class BsKind { Macro, Micro };

struct BaseStation {
    int id = 0;
    BsKind kind = BsKind::Macro;
    double x_m = 0.0;
    double y_m = 0.0;
    double height_m = 0.0;
    double max_tx_power_w = 0.0;
    double max_op_power_w = 0.0;     // P_i
    double constant_fraction = 0.0;  // q_i in (0,1)
};

struct ChannelParams {
    double bandwidth_hz = 1.25e6;
    double carrier_freq_mhz = 2000.0;
    double interference_factor = 0.01;  // scales summed rx power of other active BSs
    double noise_floor_w = 1e-13;       // division guard; the model is interference-limited
    double mobile_height_m = 1.5;
};

// COST-231 modified Hata path loss in dB, urban correction 3 dB,
// small/medium-city mobile antenna term. Distances below 1 m clamp to 1 m.
double path_loss_db(const BaseStation& bs, double x_m, double y_m, const ChannelParams& ch);

// Received power in watts at a location from one BS at full tx power.
double rx_power_w(const BaseStation& bs, double x_m, double y_m, const ChannelParams& ch);

// Shannon rate W*log2(1+SINR) where interference is the scaled sum of rx
// powers from the other active BSs. bs_index must be active.
double transmission_rate(const std::vector<BaseStation>& roster, int bs_index,
                         double x_m, double y_m, std::uint32_t active_mask,
                         const ChannelParams& ch);

// Fraction of time per m^2 needed to serve the cell's traffic at this rate.
double system_load_density(const CellTraffic& cell, double rate_bps);

// Load-aware association (one serving BS per cell): argmax over active BSs of
// c_j(x) / ((1-q_j) P_j + varsigma * (1-rho_prev_j)^-2), ties to the lowest
// BS index. prev_loads are the previous stage's system loads.
std::vector<std::int32_t> associate(const RegionGrid& grid,
                                    const std::vector<BaseStation>& roster,
                                    std::uint32_t active_mask,
                                    const std::vector<double>& prev_loads,
                                    double varsigma, const ChannelParams& ch);

// System loads rho_i from an association; sleeping BSs carry zero.
std::vector<double> compute_loads(const RegionGrid& grid,
                                  const std::vector<BaseStation>& roster,
                                  const std::vector<std::int32_t>& assoc,
                                  std::uint32_t active_mask, const ChannelParams& ch);

// Feasible iff every load is strictly below 1.
bool is_feasible(const std::vector<double>& loads);

// Energy model: sum over active BSs of (1-q_i) rho_i P_i + q_i P_i.
double energy_cost(const std::vector<double>& loads, std::uint32_t active_mask,
                   const std::vector<BaseStation>& roster);

// Expected flows in system: sum over active BSs of rho/(1-rho). Requires
// feasible loads.
double delay_cost(const std::vector<double>& loads, std::uint32_t active_mask);

double total_cost(double energy_w, double delay_flows, double varsigma);

struct CostBreakdown {
    double energy_w = 0.0;
    double delay_flows = 0.0;
    double total = 0.0;
    double varsigma = 0.0;
};

CostBreakdown make_cost(const std::vector<double>& loads, std::uint32_t active_mask,
                        const std::vector<BaseStation>& roster, double varsigma);

// Precomputed rx power of every BS at every cell center; the geometry never
// changes within a run.
class RadioMap {
public:
    RadioMap(const RegionGrid& grid, const std::vector<BaseStation>& roster,
             const ChannelParams& ch);

    int n_bs() const { return n_bs_; }
    int n_cells() const { return n_cells_; }
    double rx(int bs, int cell) const {
        return rx_[static_cast<std::size_t>(bs) * n_cells_ + cell];
    }

    // Rates for all active BSs at every cell under this mask.
    // out is sized n_bs*n_cells; entries for sleeping BSs are untouched.
    void rates_for_mask(std::uint32_t active_mask, const ChannelParams& ch,
                        std::vector<double>& out) const;

private:
    int n_bs_ = 0;
    int n_cells_ = 0;
    std::vector<double> rx_;
};

}  // namespace tactsim
