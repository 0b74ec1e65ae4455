#include <cmath>

#include "doctest.h"
#include "tactsim/radio.hpp"
#include "test_support.hpp"

using namespace tactsim;
using testsup::close_rel;

namespace {

BaseStation macro_at(double x, double y) {
    return {0, BsKind::Macro, x, y, 32.0, 20.0, 865.0, 0.5};
}

ChannelParams default_channel() { return ChannelParams{}; }

}  // namespace

TEST_CASE("path loss: frozen single-formula evaluation") {
    // h_b=32 m, f=2000 MHz, h_m=1.5 m, d=1 km, urban correction 3 dB;
    // value computed independently before this test was written
    BaseStation bs = macro_at(0.0, 0.0);
    ChannelParams ch = default_channel();
    double pl = path_loss_db(bs, 1000.0, 0.0, ch);
    CHECK(close_rel(pl, 140.35665145301812, 1e-9));
}

TEST_CASE("path loss: doubling the distance adds the log-slope exactly") {
    BaseStation bs = macro_at(0.0, 0.0);
    ChannelParams ch = default_channel();
    double slope = 44.9 - 6.55 * std::log10(32.0);
    for (double d : {120.0, 400.0, 1000.0, 3000.0}) {
        double delta = path_loss_db(bs, 2.0 * d, 0.0, ch) - path_loss_db(bs, d, 0.0, ch);
        CHECK(close_rel(delta, slope * std::log10(2.0), 1e-9));
    }
}

TEST_CASE("path loss: sub-meter distances clamp to one meter") {
    BaseStation bs = macro_at(100.0, 100.0);
    ChannelParams ch = default_channel();
    double at_clamp = path_loss_db(bs, 100.0, 100.0, ch);
    CHECK(std::isfinite(at_clamp));
    CHECK(at_clamp == path_loss_db(bs, 100.0, 101.0, ch));
}

TEST_CASE("path loss: monotone nondecreasing in distance") {
    BaseStation bs = macro_at(0.0, 0.0);
    ChannelParams ch = default_channel();
    double prev = -1e300;
    for (double d = 1.0; d < 5000.0; d *= 1.25) {
        double pl = path_loss_db(bs, d, 0.0, ch);
        CHECK(pl >= prev);
        prev = pl;
    }
}

TEST_CASE("transmission rate: single BS sees no interference term") {
    std::vector<BaseStation> roster{macro_at(0.0, 0.0)};
    ChannelParams ch = default_channel();
    double rx = rx_power_w(roster[0], 400.0, 0.0, ch);
    double expect = ch.bandwidth_hz * std::log2(1.0 + rx / ch.noise_floor_w);
    CHECK(close_rel(transmission_rate(roster, 0, 400.0, 0.0, 0b1, ch), expect, 1e-12));
}

TEST_CASE("transmission rate: zero interference factor decouples the mask") {
    std::vector<BaseStation> roster{macro_at(0.0, 0.0), macro_at(500.0, 0.0),
                                    macro_at(0.0, 500.0)};
    roster[1].id = 1;
    roster[2].id = 2;
    ChannelParams ch = default_channel();
    ch.interference_factor = 0.0;
    double alone = transmission_rate(roster, 0, 300.0, 100.0, 0b001, ch);
    double crowded = transmission_rate(roster, 0, 300.0, 100.0, 0b111, ch);
    CHECK(alone == crowded);
}

TEST_CASE("transmission rate: co-located twins at full interference give W") {
    std::vector<BaseStation> roster{macro_at(200.0, 200.0), macro_at(200.0, 200.0)};
    roster[1].id = 1;
    ChannelParams ch = default_channel();
    ch.interference_factor = 1.0;
    ch.noise_floor_w = 0.0;
    // SINR = rx/rx = 1 -> rate = W log2(2) = W
    CHECK(close_rel(transmission_rate(roster, 0, 900.0, 500.0, 0b11, ch), ch.bandwidth_hz, 1e-9));
}

TEST_CASE("system load density") {
    CellTraffic cell{5e-6, 8e5};  // 4 bit/s/m^2
    CHECK(close_rel(system_load_density(cell, 1e6), 4e-6, 1e-12));
    CHECK(system_load_density({0.0, 8e5}, 1e6) == 0.0);
    CHECK(close_rel(system_load_density(cell, 2e6), 0.5 * system_load_density(cell, 1e6), 1e-12));
    CHECK_THROWS_AS(system_load_density(cell, 0.0), std::invalid_argument);
}

TEST_CASE("associate: varsigma-zero metric matches the explicit argmax") {
    tactsim::RunConfig cfg = testsup::two_macro_config(1e-6);
    cfg.network.base_stations[1].max_op_power_w = 300.0;  // asymmetric weights
    RegionGrid grid = cfg.make_traffic_field().realize(1e-6);
    auto roster = cfg.effective_roster();
    ChannelParams ch = cfg.network.channel;
    std::vector<double> zeros(2, 0.0);
    auto assoc = associate(grid, roster, 0b11, zeros, 0.0, ch);
    for (int c = 0; c < grid.cell_count(); ++c) {
        double x, y;
        grid.cell_center(c, x, y);
        double m0 = transmission_rate(roster, 0, x, y, 0b11, ch) / (0.5 * 865.0);
        double m1 = transmission_rate(roster, 1, x, y, 0b11, ch) / (0.5 * 300.0);
        std::int32_t expect = m1 > m0 ? 1 : 0;  // ties to the lowest index
        CHECK(assoc[c] == expect);
    }
}

TEST_CASE("associate: single active BS takes every cell; empty set throws") {
    tactsim::RunConfig cfg = testsup::two_macro_config(1e-6);
    RegionGrid grid = cfg.make_traffic_field().realize(1e-6);
    auto roster = cfg.effective_roster();
    std::vector<double> zeros(2, 0.0);
    auto assoc = associate(grid, roster, 0b10, zeros, 0.0, cfg.network.channel);
    for (auto a : assoc) CHECK(a == 1);
    CHECK_THROWS_AS(associate(grid, roster, 0, zeros, 0.0, cfg.network.channel),
                    std::invalid_argument);
}

TEST_CASE("associate: equal-power twins split by distance") {
    tactsim::RunConfig cfg = testsup::two_macro_config(1e-6);
    RegionGrid grid = cfg.make_traffic_field().realize(1e-6);
    auto roster = cfg.effective_roster();  // BS0 at x=300, BS1 at x=700
    std::vector<double> zeros(2, 0.0);
    auto assoc = associate(grid, roster, 0b11, zeros, 0.0, cfg.network.channel);
    for (int c = 0; c < grid.cell_count(); ++c) {
        double x, y;
        grid.cell_center(c, x, y);
        if (std::fabs(x - 300.0) < std::fabs(x - 700.0) - 1.0) CHECK(assoc[c] == 0);
        if (std::fabs(x - 700.0) < std::fabs(x - 300.0) - 1.0) CHECK(assoc[c] == 1);
    }
}

TEST_CASE("associate: argmax invariant under a common rate scale") {
    tactsim::RunConfig cfg = testsup::two_macro_config(1e-6);
    cfg.network.base_stations[1].max_op_power_w = 500.0;
    RegionGrid grid = cfg.make_traffic_field().realize(1e-6);
    auto roster = cfg.effective_roster();
    std::vector<double> zeros(2, 0.0);
    ChannelParams ch = cfg.network.channel;
    auto base = associate(grid, roster, 0b11, zeros, 0.0, ch);
    ch.bandwidth_hz *= 37.0;  // scales every rate by the same constant
    auto scaled = associate(grid, roster, 0b11, zeros, 0.0, ch);
    CHECK(base == scaled);
}

TEST_CASE("compute_loads: no traffic, single-term sum and symmetry") {
    tactsim::RunConfig cfg = testsup::two_macro_config(5e-6);
    auto roster = cfg.effective_roster();
    ChannelParams ch = cfg.network.channel;

    SUBCASE("zero traffic gives zero loads") {
        RegionGrid grid = cfg.make_traffic_field().realize(0.0);
        std::vector<double> zeros(2, 0.0);
        auto assoc = associate(grid, roster, 0b11, zeros, 0.0, ch);
        auto loads = compute_loads(grid, roster, assoc, 0b11, ch);
        CHECK(loads[0] == 0.0);
        CHECK(loads[1] == 0.0);
    }

    SUBCASE("one cell, one BS: rho = density * area / rate") {
        RegionGrid g = make_grid(100.0, 100.0, 100.0);
        g.cells[0] = {5e-6, 8e5};
        std::vector<std::int32_t> assoc{0};
        auto loads = compute_loads(g, {roster[0]}, assoc, 0b1, ch);
        double x, y;
        g.cell_center(0, x, y);
        double rate = transmission_rate({roster[0]}, 0, x, y, 0b1, ch);
        CHECK(close_rel(loads[0], 4.0 * 100.0 * 100.0 / rate, 1e-12));
    }

    SUBCASE("mirror-symmetric deployment splits the load evenly") {
        RegionGrid grid = cfg.make_traffic_field().realize(5e-6);
        std::vector<double> zeros(2, 0.0);
        auto assoc = associate(grid, roster, 0b11, zeros, 0.0, ch);
        auto loads = compute_loads(grid, roster, assoc, 0b11, ch);
        CHECK(close_rel(loads[0], loads[1], 1e-9));
    }
}

TEST_CASE("feasibility boundary is strict") {
    CHECK(is_feasible({0.0, 0.0}));
    CHECK_FALSE(is_feasible({0.5, 1.0}));
    CHECK(is_feasible({0.999, 0.999}));
}

TEST_CASE("energy cost hand evaluations and decomposition") {
    std::vector<BaseStation> roster{macro_at(0.0, 0.0)};
    CHECK(energy_cost({0.0}, 0b1, roster) == doctest::Approx(432.5).epsilon(1e-12));
    CHECK(energy_cost({0.5}, 0b1, roster) == doctest::Approx(648.75).epsilon(1e-12));
    CHECK(energy_cost({0.5}, 0, roster) == 0.0);  // empty active set

    // decomposition: constant term is load independent
    std::vector<BaseStation> pair{macro_at(0.0, 0.0), macro_at(10.0, 0.0)};
    pair[1].id = 1;
    pair[1].constant_fraction = 0.3;
    std::vector<double> loads{0.42, 0.77};
    double constant = energy_cost({0.0, 0.0}, 0b11, pair);
    double load_part = 0.0;
    for (int i = 0; i < 2; ++i)
        load_part += (1.0 - pair[i].constant_fraction) * loads[i] * pair[i].max_op_power_w;
    CHECK(close_rel(energy_cost(loads, 0b11, pair), constant + load_part, 1e-12));
}

TEST_CASE("delay cost hand evaluations, gating and convexity") {
    CHECK(delay_cost({0.5}, 0b1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(delay_cost({0.0}, 0b1) == 0.0);
    CHECK(delay_cost({0.2, 0.8}, 0b11) == doctest::Approx(4.25).epsilon(1e-12));
    CHECK_THROWS_AS(delay_cost({1.0}, 0b1), std::logic_error);

    // strictly increasing, convex: finite-difference slope grows
    double h = 1e-4;
    double prev_slope = -1.0;
    for (double rho : {0.1, 0.5, 0.9}) {
        double slope = (delay_cost({rho + h}, 0b1) - delay_cost({rho}, 0b1)) / h;
        CHECK(slope > 0.0);
        CHECK(slope > prev_slope);
        prev_slope = slope;
    }
}

TEST_CASE("total cost composition") {
    CHECK(total_cost(432.5, 17.0, 0.0) == 432.5);
    CHECK(total_cost(432.5, 1.0, 100.0) == doctest::Approx(532.5).epsilon(1e-12));
    CHECK(total_cost(995.0, 0.0, 1e6) == 995.0);
}

TEST_CASE("monotonicity: denser traffic never lowers loads or costs") {
    tactsim::RunConfig cfg = testsup::two_macro_config(5e-6);
    auto roster = cfg.effective_roster();
    ChannelParams ch = cfg.network.channel;
    RegionGrid grid = cfg.make_traffic_field().realize(5e-6);
    std::vector<double> zeros(2, 0.0);
    auto assoc = associate(grid, roster, 0b11, zeros, 0.0, ch);
    auto loads = compute_loads(grid, roster, assoc, 0b11, ch);
    double e = energy_cost(loads, 0b11, roster);
    double d = delay_cost(loads, 0b11);

    grid.cells[17].arrival_density *= 3.0;  // fixed association, one denser cell
    auto loads2 = compute_loads(grid, roster, assoc, 0b11, ch);
    for (int i = 0; i < 2; ++i) CHECK(loads2[i] >= loads[i]);
    CHECK(energy_cost(loads2, 0b11, roster) >= e);
    CHECK(delay_cost(loads2, 0b11) >= d);
}
