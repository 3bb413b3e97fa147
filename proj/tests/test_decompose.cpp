#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "conet/decompose.hpp"
#include "fixtures.hpp"

using namespace conet;

namespace {

WeightedNetwork hand_triangle() {
    // edges 0-1: 0.2, 1-2: 0.5, 0-2: 0.9
    WeightedNetwork net(fixtures::make_codes(3));
    net.set_weight(0, 1, 0.2);
    net.set_weight(1, 2, 0.5);
    net.set_weight(0, 2, 0.9);
    return net;
}

}  // namespace

TEST_CASE("threshold grid is ascending, starts at 0 and avoids edge weights") {
    const auto net = fixtures::random_network(15, 0.4, 6);
    const auto grid = make_threshold_grid(net, 400);
    REQUIRE(grid.size() == 400);
    CHECK(grid.front() == 0.0);
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(grid.back() > net.max_weight());
    for (const auto& e : net.edges())
        for (double t : grid) CHECK(t != e.weight);
    CHECK_THROWS_AS(make_threshold_grid(net, 1), ConfigError);
}

TEST_CASE("lcc sizes on the hand triangle") {
    const auto net = hand_triangle();
    const auto edges = net.edges();
    CHECK(detail::lcc_members_at(net, edges, 0.1).size() == 3);
    CHECK(detail::lcc_members_at(net, edges, 0.3).size() == 3);  // path 0-2-1 survives
    CHECK(detail::lcc_members_at(net, edges, 0.6).size() == 2);  // only 0-2 left
    CHECK(detail::lcc_members_at(net, edges, 0.95).size() == 1);
    // strict retention: sitting exactly on a weight drops that edge
    CHECK(detail::lcc_members_at(net, edges, 0.5).size() == 2);
}

TEST_CASE("lcc curve is non-increasing and spans N down to 1") {
    const auto net = fixtures::connected_random_network(20, 0.3, 9);
    const auto grid = make_threshold_grid(net, 200);
    const auto sizes = lcc_curve(net, grid);
    REQUIRE(sizes.size() == grid.size());
    CHECK(sizes.front() == net.size());
    CHECK(sizes.back() == 1);
    for (std::size_t k = 1; k < sizes.size(); ++k) CHECK(sizes[k] <= sizes[k - 1]);
    CHECK_THROWS_AS(lcc_curve(net, {0.5, 0.1}), ConfigError);
}

TEST_CASE("inner core recovers the planted clique exactly") {
    const auto cp = fixtures::core_periphery();
    const auto grid = make_threshold_grid(cp.net, 400);
    const auto core = inner_core(cp.net, 10, grid);
    CHECK(core.core_size == 8);
    CHECK(core.members == cp.core_codes);
    CHECK(core.size_jumped_past_target);  // 36 -> 8, never exactly 10
    CHECK(core.interval_lo > 0.05);
    CHECK(core.interval_hi >= core.interval_lo);
}

TEST_CASE("inner core persistence interval covers the stable stretch") {
    const auto cp = fixtures::core_periphery();
    const auto grid = make_threshold_grid(cp.net, 400);
    const auto core = inner_core(cp.net, 10, grid);
    const auto edges = cp.net.edges();
    // everywhere inside the reported interval the same member set holds
    for (double t : grid) {
        if (t < core.interval_lo || t > core.interval_hi) continue;
        auto members = detail::lcc_members_at(cp.net, edges, t);
        std::vector<std::string> codes;
        for (std::size_t i : members) codes.push_back(cp.net.nodes()[i]);
        std::sort(codes.begin(), codes.end());
        CHECK(codes == core.members);
    }
}

TEST_CASE("two-node network has a size-2 core") {
    WeightedNetwork net(fixtures::make_codes(2));
    net.set_weight(0, 1, 0.4);
    const auto grid = make_threshold_grid(net, 50);
    const auto core = inner_core(net, 10, grid);
    CHECK(core.core_size == 2);
    CHECK(core.members == net.nodes());
}

TEST_CASE("no qualifying size raises a numeric error") {
    // grid with a single coarse point where the LCC is the full graph
    const auto net = fixtures::connected_random_network(6, 0.6, 2);
    CHECK_THROWS_AS(inner_core(net, 3, {0.0, 0.01}), NumericError);
    CHECK_THROWS_AS(inner_core(net, 1, make_threshold_grid(net)), ConfigError);
}

TEST_CASE("compare_to_null pairs the empirical curve with an ordered band") {
    const auto cp = fixtures::core_periphery();
    const auto grid = make_threshold_grid(cp.net, 80);
    EnsembleSpec spec;
    spec.replicates = 30;
    const auto profile = compare_to_null(cp.net, spec, grid);
    REQUIRE(profile.thresholds.size() == grid.size());
    REQUIRE(profile.lcc_sizes.size() == grid.size());
    REQUIRE(profile.null_band.mean.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(profile.null_band.lower[k] <= profile.null_band.mean[k] + 1e-12);
        CHECK(profile.null_band.mean[k] <= profile.null_band.upper[k] + 1e-12);
        CHECK(profile.null_band.upper[k] <= static_cast<double>(cp.net.size()));
    }
    // in the clique-only regime the observed LCC sits below the null band
    bool below_somewhere = false;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (static_cast<double>(profile.lcc_sizes[k]) < profile.null_band.lower[k])
            below_somewhere = true;
    CHECK(below_somewhere);
}
