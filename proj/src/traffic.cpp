#include "tactsim/traffic.hpp"

#include <cmath>
#include <numbers>

namespace tactsim {

double RegionGrid::cell_width(int ix) const {
    double rem = width_m - ix * cell_size_m;
    return rem < cell_size_m ? rem : cell_size_m;
}

double RegionGrid::cell_height(int iy) const {
    double rem = height_m - iy * cell_size_m;
    return rem < cell_size_m ? rem : cell_size_m;
}

double RegionGrid::cell_area(int idx) const {
    int ix = idx % nx;
    int iy = idx / nx;
    return cell_width(ix) * cell_height(iy);
}

void RegionGrid::cell_center(int idx, double& x, double& y) const {
    int ix = idx % nx;
    int iy = idx / nx;
    x = ix * cell_size_m + 0.5 * cell_width(ix);
    y = iy * cell_size_m + 0.5 * cell_height(iy);
}

RegionGrid make_grid(double width_m, double height_m, double cell_size_m) {
    if (width_m <= 0.0 || height_m <= 0.0 || cell_size_m <= 0.0)
        throw ConfigError("grid dimensions and cell size must be positive");
    RegionGrid g;
    g.width_m = width_m;
    g.height_m = height_m;
    g.cell_size_m = cell_size_m;
    g.nx = static_cast<int>(std::ceil(width_m / cell_size_m));
    g.ny = static_cast<int>(std::ceil(height_m / cell_size_m));
    g.cells.assign(static_cast<std::size_t>(g.nx) * g.ny, CellTraffic{});
    return g;
}

double temporal_arrival_rate(const TemporalProfile& profile, long stage) {
    if (profile.kind == ProfileKind::Static) return profile.lambda_mean;
    // reduce the phase in integers so the rate is exactly D-periodic
    long d = profile.period_stages;
    long m = (stage + profile.phase_stages) % d;
    if (m < 0) m += d;
    double angle = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(d);
    return profile.lambda_var * std::cos(angle) + profile.lambda_mean;
}

double traffic_load_density(const CellTraffic& cell) {
    return cell.arrival_density * cell.mean_file_size_bits;
}

void LoadHistory::update(const std::vector<double>& loads) {
    for (std::size_t i = 0; i < mean.size(); ++i) {
        count[i] += 1;
        mean[i] += (loads[i] - mean[i]) / static_cast<double>(count[i]);
    }
}

std::vector<double> bs_traffic_loads(const RegionGrid& grid,
                                     const std::vector<std::int32_t>& assoc,
                                     std::uint32_t active_mask, int n_bs) {
    std::vector<double> gamma(static_cast<std::size_t>(n_bs), 0.0);
    for (int c = 0; c < grid.cell_count(); ++c) {
        std::int32_t bs = assoc[static_cast<std::size_t>(c)];
        if (bs < 0) continue;
        if (bs >= n_bs || ((active_mask >> bs) & 1u) == 0)
            throw std::invalid_argument("association references a sleeping BS");
        gamma[static_cast<std::size_t>(bs)] +=
            traffic_load_density(grid.cells[static_cast<std::size_t>(c)]) * grid.cell_area(c);
    }
    return gamma;
}

std::uint32_t quantize_state(const std::vector<double>& loads, LoadHistory& history) {
    std::uint32_t state = 0;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        bool high;
        if (history.count[i] == 0)
            high = loads[i] > 0.0;
        else
            high = loads[i] >= history.mean[i];
        if (high) state |= (1u << i);
    }
    history.update(loads);
    return state;
}

TrafficField::TrafficField(RegionGrid geometry, TemporalProfile profile,
                           double mean_file_size_bits, std::vector<HotspotRect> hotspots,
                           double noise_amplitude)
    : geometry_(std::move(geometry)), profile_(profile), noise_amplitude_(noise_amplitude) {
    if (mean_file_size_bits <= 0.0) throw ConfigError("mean file size must be positive");
    if (noise_amplitude_ < 0.0 || noise_amplitude_ >= 1.0)
        throw ConfigError("noise amplitude must lie in [0, 1)");
    if (profile_.kind == ProfileKind::Sinusoidal) {
        if (profile_.period_stages < 1) throw ConfigError("sinusoidal period must be >= 1 stage");
        if (profile_.lambda_var < 0.0 || profile_.lambda_mean < profile_.lambda_var)
            throw ConfigError("sinusoidal profile requires lambda_mean >= lambda_var >= 0");
    } else if (profile_.lambda_mean < 0.0) {
        throw ConfigError("arrival rate must be >= 0");
    }

    // cells carry the unit spatial shape; hotspots scale the density
    for (int c = 0; c < geometry_.cell_count(); ++c) {
        double x, y;
        geometry_.cell_center(c, x, y);
        double mult = 1.0;
        for (const auto& h : hotspots) {
            if (h.multiplier < 0.0) throw ConfigError("hotspot multiplier must be >= 0");
            if (x >= h.x_min_m && x <= h.x_max_m && y >= h.y_min_m && y <= h.y_max_m)
                mult *= h.multiplier;
        }
        auto& cell = geometry_.cells[static_cast<std::size_t>(c)];
        cell.arrival_density = mult;
        cell.mean_file_size_bits = mean_file_size_bits;
    }

    unit_cell_load_.resize(static_cast<std::size_t>(geometry_.cell_count()));
    for (int c = 0; c < geometry_.cell_count(); ++c) {
        unit_cell_load_[static_cast<std::size_t>(c)] =
            traffic_load_density(geometry_.cells[static_cast<std::size_t>(c)]) * geometry_.cell_area(c);
        unit_offered_total_ += unit_cell_load_[static_cast<std::size_t>(c)];
    }
}

double TrafficField::stage_factor(long stage, RngStream& traffic_rng) const {
    double rate = temporal_arrival_rate(profile_, stage);
    if (noise_amplitude_ > 0.0) {
        double u = traffic_rng.next_unit();
        rate *= 1.0 + noise_amplitude_ * (2.0 * u - 1.0);
    }
    return rate;
}

RegionGrid TrafficField::realize(double stage_factor) const {
    RegionGrid g = geometry_;
    for (auto& cell : g.cells) cell.arrival_density *= stage_factor;
    return g;
}

}  // namespace tactsim
