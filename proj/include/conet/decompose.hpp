#pragma once
// Threshold-sweep decomposition: LCC-size curves over a cutoff grid, the
// inner core surviving near-complete decay, and the null-band overlay.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "conet/metrics.hpp"
#include "conet/network.hpp"
#include "conet/null_model.hpp"

namespace conet {

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent, rank_;
    explicit UnionFind(std::size_t n) : parent(n), rank_(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }
};

// Members of the largest component after dropping edges with w <= t.
// Ties between equal-size components resolve to the lowest-index root.
inline std::vector<std::size_t> lcc_members_at(const WeightedNetwork& net,
                                               const std::vector<Edge>& edges, double t) {
    UnionFind uf(net.size());
    for (const auto& e : edges)
        if (e.weight > t) uf.unite(e.i, e.j);
    std::vector<std::size_t> count(net.size(), 0);
    for (std::size_t i = 0; i < net.size(); ++i) ++count[uf.find(i)];
    std::size_t best = 0;
    for (std::size_t i = 1; i < net.size(); ++i)
        if (count[i] > count[best]) best = i;
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < net.size(); ++i)
        if (uf.find(i) == best) members.push_back(i);
    return members;
}

}  // namespace detail

// Ascending grid over [0, max weight + eps], nudged off exact edge weights so
// the strict w > t retention rule never sits on a boundary.
inline std::vector<double> make_threshold_grid(const WeightedNetwork& net,
                                               std::size_t points = 400) {
    if (points < 2) throw ConfigError("threshold grid needs at least 2 points");
    const double max_w = net.max_weight();
    const double top = max_w + std::max(1e-9, 1e-6 * max_w);
    std::set<double> weights;
    for (const auto& e : net.edges()) weights.insert(e.weight);
    std::vector<double> grid(points);
    const double nudge = top * 1e-9;
    for (std::size_t k = 0; k < points; ++k) {
        double t = top * static_cast<double>(k) / static_cast<double>(points - 1);
        while (t > 0.0 && weights.count(t)) t -= nudge;
        grid[k] = t;
    }
    return grid;
}

// Per-threshold LCC node count; edges kept iff w > t.
inline std::vector<std::size_t> lcc_curve(const WeightedNetwork& net,
                                          const std::vector<double>& grid) {
    if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("threshold grid must ascend");
    const auto edges = net.edges();
    std::vector<std::size_t> sizes;
    sizes.reserve(grid.size());
    for (double t : grid) sizes.push_back(detail::lcc_members_at(net, edges, t).size());
    return sizes;
}

struct InnerCore {
    std::vector<std::string> members;  // sorted codes
    std::size_t core_size = 0;
    double interval_lo = 0.0;  // persistence interval on the grid
    double interval_hi = 0.0;
    bool size_jumped_past_target = false;  // no LCC of exactly `target` nodes occurred
};

// Largest attained LCC size <= target along the grid; node set taken at the
// smallest threshold attaining it (the last-surviving strongest cluster),
// with the maximal contiguous interval over which that set is unchanged.
inline InnerCore inner_core(const WeightedNetwork& net, std::size_t target,
                            const std::vector<double>& grid) {
    if (target < 2) throw ConfigError("inner core target must be >= 2");
    if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("threshold grid must ascend");
    const auto edges = net.edges();
    std::vector<std::vector<std::size_t>> members_at(grid.size());
    std::size_t best_size = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        members_at[k] = detail::lcc_members_at(net, edges, grid[k]);
        const std::size_t sz = members_at[k].size();
        if (sz >= 2 && sz <= target && sz > best_size) best_size = sz;
    }
    if (best_size == 0) throw NumericError("no inner core: no LCC of size in [2, target] on grid");

    std::size_t first = grid.size();
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (members_at[k].size() == best_size) {
            first = k;
            break;
        }
    std::size_t last = first;
    while (last + 1 < grid.size() && members_at[last + 1] == members_at[first]) ++last;

    InnerCore core;
    core.core_size = best_size;
    core.size_jumped_past_target = best_size < target;
    core.interval_lo = grid[first];
    core.interval_hi = grid[last];
    for (std::size_t i : members_at[first]) core.members.push_back(net.nodes()[i]);
    std::sort(core.members.begin(), core.members.end());
    return core;
}

struct DecompositionProfile {
    std::vector<double> thresholds;
    std::vector<std::size_t> lcc_sizes;
    EnsembleBand null_band;
};

// Empirical LCC curve paired with the null-ensemble band for overlay plots.
inline DecompositionProfile compare_to_null(const WeightedNetwork& net, const EnsembleSpec& spec,
                                            const std::vector<double>& grid) {
    DecompositionProfile profile;
    profile.thresholds = grid;
    profile.lcc_sizes = lcc_curve(net, grid);
    profile.null_band = ensemble_band(net, spec, [&grid](const WeightedNetwork& g) {
        const auto sizes = lcc_curve(g, grid);
        return std::vector<double>(sizes.begin(), sizes.end());
    });
    return profile;
}

}  // namespace conet
