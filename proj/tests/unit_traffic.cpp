#include <cmath>

#include "doctest.h"
#include "tactsim/traffic.hpp"
#include "test_support.hpp"

using namespace tactsim;
using testsup::close_rel;

namespace {

TemporalProfile fig8_profile() {
    TemporalProfile p;
    p.kind = ProfileKind::Sinusoidal;
    p.lambda_mean = 1e-5;
    p.lambda_var = 0.99e-5;
    p.period_stages = 24;
    p.phase_stages = 10;
    return p;
}

}  // namespace

TEST_CASE("temporal arrival rate: static profile ignores the stage") {
    TemporalProfile p;
    p.kind = ProfileKind::Static;
    p.lambda_mean = 5e-6;
    for (long k : {0L, 1L, 17L, 100000L}) CHECK(temporal_arrival_rate(p, k) == 5e-6);
}

TEST_CASE("temporal arrival rate: sinusoidal hand evaluations") {
    TemporalProfile p = fig8_profile();
    // (14+10) mod 24 = 0 -> cos = 1 -> lambda_var + lambda_mean
    CHECK(close_rel(temporal_arrival_rate(p, 14), 1.99e-5, 1e-9));
    // (2+10) mod 24 = 12 -> cos = -1 -> lambda_mean - lambda_var
    CHECK(close_rel(temporal_arrival_rate(p, 2), 0.01e-5, 1e-9));
}

TEST_CASE("temporal arrival rate: nonnegative and exactly D-periodic") {
    TemporalProfile p = fig8_profile();
    for (long k = 0; k < 500; ++k) {
        double r = temporal_arrival_rate(p, k);
        CHECK(r >= 0.0);
        CHECK(r == temporal_arrival_rate(p, k + p.period_stages));  // bitwise
    }
}

TEST_CASE("traffic load density") {
    CHECK(traffic_load_density({5e-6, 8e5}) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(traffic_load_density({0.0, 8e5}) == 0.0);
    CHECK(traffic_load_density({1e-4, 8e5}) == doctest::Approx(80.0).epsilon(1e-12));
}

TEST_CASE("bs_traffic_loads: single BS carries the whole region") {
    RegionGrid g = make_grid(2000.0, 2000.0, 50.0);
    for (auto& c : g.cells) c = {5e-6, 8e5};  // density 4 bit/s/m^2
    std::vector<std::int32_t> assoc(g.cell_count(), 0);
    auto gamma = bs_traffic_loads(g, assoc, 0b01, 2);
    CHECK(close_rel(gamma[0], 1.6e7, 1e-9));
    CHECK(gamma[1] == 0.0);
}

TEST_CASE("bs_traffic_loads: empty grid and sleeping-BS error") {
    RegionGrid g = make_grid(500.0, 500.0, 100.0);
    std::vector<std::int32_t> assoc(g.cell_count(), 0);
    auto gamma = bs_traffic_loads(g, assoc, 0b01, 2);
    for (double v : gamma) CHECK(v == 0.0);

    assoc[0] = 1;  // BS 1 sleeps under mask 0b01
    CHECK_THROWS_AS(bs_traffic_loads(g, assoc, 0b01, 2), std::invalid_argument);
}

TEST_CASE("traffic conservation over a non-divisible grid") {
    // 1990 x 970 with 300 m cells: edge cells are clipped
    RegionGrid g = make_grid(1990.0, 970.0, 300.0);
    CHECK(g.nx == 7);
    CHECK(g.ny == 4);
    double total_area = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) total_area += g.cell_area(c);
    CHECK(close_rel(total_area, 1990.0 * 970.0, 1e-12));

    RngStream rng(99, "fill");
    double offered = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) {
        g.cells[c] = {1e-6 * rng.next_unit(), 8e5};
        offered += traffic_load_density(g.cells[c]) * g.cell_area(c);
    }
    // split cells round-robin over 3 BSs; conservation must hold
    std::vector<std::int32_t> assoc(g.cell_count());
    for (int c = 0; c < g.cell_count(); ++c) assoc[c] = c % 3;
    auto gamma = bs_traffic_loads(g, assoc, 0b111, 3);
    CHECK(close_rel(gamma[0] + gamma[1] + gamma[2], offered, 1e-9));
}

TEST_CASE("quantize_state: ties, comparisons and the empty-history rule") {
    SUBCASE("loads equal to the mean quantize to all-ones") {
        LoadHistory h(2);
        h.mean = {5.0, 7.0};
        h.count = {3, 3};
        CHECK(quantize_state({5.0, 7.0}, h) == 0b11u);
    }
    SUBCASE("direct comparison") {
        LoadHistory h(2);
        h.mean = {5.0, 5.0};
        h.count = {1, 1};
        CHECK(quantize_state({10.0, 0.0}, h) == 0b01u);
    }
    SUBCASE("first stage: positive load reads 1, then seeds the history") {
        LoadHistory h(2);
        CHECK(quantize_state({3.0, 0.0}, h) == 0b01u);
        CHECK(h.mean[0] == 3.0);
        CHECK(h.mean[1] == 0.0);
        CHECK(h.count[0] == 1);
    }
}

TEST_CASE("quantize_state: constant loads drive the state to all-ones") {
    LoadHistory h(3);
    std::vector<double> loads{2.0, 9.0, 4.5};
    std::uint32_t s = 0;
    for (int k = 0; k < 50; ++k) s = quantize_state(loads, h);
    CHECK(s == 0b111u);
    for (int i = 0; i < 3; ++i) CHECK(h.mean[i] == loads[i]);
}

TEST_CASE("load history running mean equals the batch mean") {
    RngStream rng(1234, "hist");
    LoadHistory h(1);
    std::vector<double> samples;
    for (int k = 0; k < 2000; ++k) {
        samples.push_back(1000.0 * rng.next_unit());
        h.update({samples.back()});
        CHECK(close_rel(h.mean[0], testsup::batch_mean(samples), 1e-12));
    }
}

TEST_CASE("traffic field: hotspots scale the density inside the rectangle") {
    RegionGrid g = make_grid(1000.0, 1000.0, 100.0);
    HotspotRect hot{0.0, 300.0, 0.0, 300.0, 4.0};
    TemporalProfile p;
    p.lambda_mean = 2e-6;
    TrafficField field(g, p, 8e5, {hot}, 0.0);
    RegionGrid realized = field.realize(temporal_arrival_rate(p, 1));
    // cell (0,0) center (50,50) is inside; (5,5) center (550,550) is not
    CHECK(close_rel(realized.cells[0].arrival_density, 8e-6, 1e-12));
    CHECK(close_rel(realized.cells[5 * realized.nx + 5].arrival_density, 2e-6, 1e-12));
}

TEST_CASE("traffic field: noise factor bounds and stream consumption") {
    RegionGrid g = make_grid(400.0, 400.0, 100.0);
    TemporalProfile p;
    p.lambda_mean = 1e-6;

    TrafficField quiet(g, p, 8e5, {}, 0.0);
    RngStream a(5, "traffic"), b(5, "traffic");
    CHECK(quiet.stage_factor(3, a) == quiet.stage_factor(3, b));
    CHECK(quiet.stage_factor(3, a) == 1e-6);  // no draw consumed
    CHECK(a.next_u64() == b.next_u64());

    TrafficField noisy(g, p, 8e5, {}, 0.25);
    RngStream c(5, "traffic");
    for (long k = 0; k < 200; ++k) {
        double f = noisy.stage_factor(k, c);
        CHECK(f >= 1e-6 * 0.75);
        CHECK(f <= 1e-6 * 1.25);
    }
}

TEST_CASE("traffic field rejects invalid profiles") {
    RegionGrid g = make_grid(400.0, 400.0, 100.0);
    TemporalProfile bad;
    bad.kind = ProfileKind::Sinusoidal;
    bad.lambda_mean = 1e-6;
    bad.lambda_var = 2e-6;  // would go negative
    CHECK_THROWS_AS(TrafficField(g, bad, 8e5, {}, 0.0), ConfigError);
}
