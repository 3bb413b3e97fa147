#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "conet/community.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace conet;

TEST_CASE("modularity of trivial partitions") {
    const auto net = fixtures::connected_random_network(8, 0.5, 4);
    const std::vector<int> one(net.size(), 0);
    CHECK(eval_modularity(net, one) == Catch::Approx(0.0).margin(1e-12));

    // singleton partition: -sum (s_i/2m)^2
    std::vector<int> singles(net.size());
    std::iota(singles.begin(), singles.end(), 0);
    const auto s = net.strengths();
    const double two_m = 2.0 * net.total_weight();
    double expected = 0.0;
    for (double v : s) expected -= (v / two_m) * (v / two_m);
    CHECK(eval_modularity(net, singles) == Catch::Approx(expected).margin(1e-12));
    CHECK(expected < 0.0);
}

TEST_CASE("two disjoint unit triangles have Q=0.5 under the natural partition") {
    const auto net = fixtures::two_triangles();
    CHECK(eval_modularity(net, {0, 0, 0, 1, 1, 1}) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("modularity matches the literal double-sum oracle") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto net = fixtures::connected_random_network(9, 0.5, seed);
        std::vector<int> part(net.size());
        Rng rng(seed);
        for (auto& c : part) c = static_cast<int>(rng.bounded(3));
        CHECK(eval_modularity(net, part) ==
              Catch::Approx(oracles::modularity(net, part)).margin(1e-12));
    }
}

TEST_CASE("louvain recovers the two triangles exactly") {
    const auto net = fixtures::two_triangles();
    const auto p = louvain(net, 42);
    CHECK(p.community_count == 2);
    CHECK(p.community[0] == p.community[1]);
    CHECK(p.community[1] == p.community[2]);
    CHECK(p.community[3] == p.community[4]);
    CHECK(p.community[4] == p.community[5]);
    CHECK(p.community[0] != p.community[3]);
    CHECK(p.modularity == Catch::Approx(0.5).margin(1e-12));

    // matches the exhaustive best partition on 6 nodes
    const auto [best, best_q] = oracles::best_partition(net);
    CHECK(p.modularity == Catch::Approx(best_q).margin(1e-12));
}

TEST_CASE("louvain on a single edge puts both nodes together with Q=0") {
    WeightedNetwork net(fixtures::make_codes(2));
    net.set_weight(0, 1, 0.7);
    const auto p = louvain(net, 1);
    CHECK(p.community_count == 1);
    CHECK(p.modularity == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("louvain is deterministic per seed and never below singleton Q") {
    const auto net = fixtures::connected_random_network(20, 0.3, 8);
    const auto p1 = louvain(net, 7);
    const auto p2 = louvain(net, 7);
    CHECK(p1.community == p2.community);
    CHECK(p1.modularity == p2.modularity);

    std::vector<int> singles(net.size());
    std::iota(singles.begin(), singles.end(), 0);
    CHECK(p1.modularity >= eval_modularity(net, singles));
    CHECK(p1.modularity >= -0.5);
    CHECK(p1.modularity <= 1.0);
}

TEST_CASE("multi-seed selection is deterministic and takes the max Q") {
    const auto net = fixtures::connected_random_network(24, 0.25, 15);
    const auto best = louvain_multi(net, 42, 10);
    for (std::size_t r = 0; r < 10; ++r)
        CHECK(best.modularity >= louvain(net, 42 + r).modularity - 1e-15);
    CHECK(louvain_multi(net, 42, 10).community == best.community);
}

TEST_CASE("louvain recovers planted blocks") {
    const auto [net, blocks] = fixtures::planted_partition();
    const auto p = louvain_multi(net, 42, 20);
    // map each detected community to its majority planted block
    std::map<int, std::map<int, int>> overlap;
    for (std::size_t i = 0; i < net.size(); ++i) ++overlap[p.community[i]][blocks[i]];
    std::size_t agree = 0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& row = overlap[p.community[i]];
        int best_block = -1, best_count = -1;
        for (const auto& [blk, cnt] : row)
            if (cnt > best_count) {
                best_count = cnt;
                best_block = blk;
            }
        if (best_block == blocks[i]) ++agree;
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(net.size()) >= 0.95);
}

TEST_CASE("category strengths on hand fixtures") {
    // two categories joined by a single 0.3 edge
    WeightedNetwork net({"C01.100", "C01.200", "C02.100"});
    net.set_weight(0, 1, 0.5);
    net.set_weight(1, 2, 0.3);
    const auto cats = category_strengths(net);
    CHECK(cats.at("C01").intra == Catch::Approx(0.5));
    CHECK(cats.at("C01").inter == Catch::Approx(0.3));
    CHECK(cats.at("C01").total == Catch::Approx(0.8));
    CHECK(cats.at("C02").intra == 0.0);
    CHECK(cats.at("C02").inter == Catch::Approx(0.3));

    // entirely inside one category: no inter strength
    WeightedNetwork solo({"C01.100", "C01.200"});
    solo.set_weight(0, 1, 0.9);
    CHECK(category_strengths(solo).at("C01").inter == 0.0);
}

TEST_CASE("category accounting conserves total weight") {
    const auto net = fixtures::random_network(30, 0.3, 12);
    const auto cats = category_strengths(net);
    double intra = 0.0, inter = 0.0;
    for (const auto& [name, s] : cats) {
        intra += s.intra;
        inter += s.inter;
        CHECK(s.total == Catch::Approx(s.intra + s.inter).margin(1e-12));
    }
    CHECK(intra + inter / 2.0 == Catch::Approx(net.total_weight()).epsilon(1e-12));
}
