#pragma once

#include <cstdint>
#include <vector>

#include "tactsim/common.hpp"

namespace tactsim {

// Arrival-rate density and mean file size at one grid cell.
struct CellTraffic {
    double arrival_density = 0.0;      // arrivals per m^2 per second
    double mean_file_size_bits = 0.0;  // bits per file
};

// Uniform spatial discretization of the served region. Cells on the far edge
// are clipped so the Riemann sum covers exactly width_m x height_m.
struct RegionGrid {
    double width_m = 0.0;
    double height_m = 0.0;
    double cell_size_m = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<CellTraffic> cells;  // row-major, index = iy * nx + ix

    int cell_count() const { return nx * ny; }
    double cell_width(int ix) const;
    double cell_height(int iy) const;
    double cell_area(int idx) const;
    void cell_center(int idx, double& x, double& y) const;
};

RegionGrid make_grid(double width_m, double height_m, double cell_size_m);

enum class ProfileKind { Static, Sinusoidal };

// Temporal arrival-rate modulation. Sinusoidal follows
// rate(k) = lambda_var * cos(2*pi*(k+phase)/period) + lambda_mean.
struct TemporalProfile {
    ProfileKind kind = ProfileKind::Static;
    double lambda_mean = 0.0;  // per m^2 per s
    double lambda_var = 0.0;   // per m^2 per s, <= lambda_mean
    long period_stages = 24;
    long phase_stages = 0;
};

double temporal_arrival_rate(const TemporalProfile& profile, long stage);

// Traffic load density lambda(x)/mu(x) in bit/s/m^2.
double traffic_load_density(const CellTraffic& cell);

// Per-BS running mean of realized traffic loads, used as the quantizer
// threshold.
struct LoadHistory {
    std::vector<double> mean;
    std::vector<std::uint64_t> count;

    explicit LoadHistory(int n_bs = 0) : mean(n_bs, 0.0), count(n_bs, 0) {}
    int size() const { return static_cast<int>(mean.size()); }
    void update(const std::vector<double>& loads);
};

// Traffic loads Gamma_i in bit/s served by each BS under the given
// association. assoc maps each cell to a BS index or -1 for unassigned.
// active_mask bit i set means BS i is on; assigning a cell to a sleeping BS
// is an error. Sleeping BSs carry zero load.
std::vector<double> bs_traffic_loads(const RegionGrid& grid,
                                     const std::vector<std::int32_t>& assoc,
                                     std::uint32_t active_mask, int n_bs);

// Binary quantizer: s_i = 1 iff Gamma_i >= historical mean (ties to 1). With
// no history yet the threshold degenerates to "any positive load". The
// history is updated with the loads afterwards.
std::uint32_t quantize_state(const std::vector<double>& loads, LoadHistory& history);

struct HotspotRect {
    double x_min_m = 0.0, x_max_m = 0.0;
    double y_min_m = 0.0, y_max_m = 0.0;
    double multiplier = 1.0;  // applied to arrival density where the cell center falls inside
};

// The exogenous traffic environment: spatial shape (hotspot multipliers),
// file sizes, temporal profile and optional per-stage multiplicative noise.
class TrafficField {
public:
    TrafficField(RegionGrid geometry, TemporalProfile profile,
                 double mean_file_size_bits, std::vector<HotspotRect> hotspots,
                 double noise_amplitude);

    const RegionGrid& geometry() const { return geometry_; }
    const TemporalProfile& profile() const { return profile_; }
    double noise_amplitude() const { return noise_amplitude_; }

    // Multiplicative factor applied to the unit spatial shape at this stage.
    // Draws one noise value from the stream iff noise is enabled.
    double stage_factor(long stage, RngStream& traffic_rng) const;

    // Materializes the realized grid for a stage factor.
    RegionGrid realize(double stage_factor) const;

    // lambda(x)/mu(x) * area for each cell at unit factor; loads scale
    // linearly with the stage factor.
    const std::vector<double>& unit_cell_load_bits() const { return unit_cell_load_; }
    double unit_offered_total_bits() const { return unit_offered_total_; }

private:
    RegionGrid geometry_;  // cells hold the spatial shape at unit rate
    TemporalProfile profile_;
    double noise_amplitude_ = 0.0;
    std::vector<double> unit_cell_load_;
    double unit_offered_total_ = 0.0;
};

}  // namespace tactsim
