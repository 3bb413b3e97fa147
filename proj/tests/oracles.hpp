#pragma once
// Independent brute-force oracles for small graphs. These deliberately share
// no code with the library implementations they check: distances and path
// counts come from exhaustive simple-path enumeration, clustering from
// direct triad enumeration, assortativity from a two-pass Pearson over the
// orientation list, and modularity from the literal double sum.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "conet/network.hpp"

namespace oracles {

using conet::WeightedNetwork;

struct PathInfo {
    double distance = std::numeric_limits<double>::infinity();
    std::vector<std::vector<std::size_t>> shortest_paths;  // node sequences
};

// All shortest paths between s and t by exhaustive DFS over simple paths,
// with a relative tie tolerance matching the library's convention.
inline PathInfo all_shortest_paths(const WeightedNetwork& net, std::size_t s, std::size_t t,
                                   double tol = 1e-9) {
    PathInfo info;
    const std::size_t n = net.size();
    std::vector<bool> used(n, false);
    std::vector<std::size_t> path{s};
    used[s] = true;

    std::function<void(std::size_t, double)> dfs = [&](std::size_t u, double len) {
        if (u == t) {
            if (info.shortest_paths.empty()) {
                info.distance = len;
                info.shortest_paths.push_back(path);
            } else if (len < info.distance - tol * std::max(1.0, info.distance)) {
                info.distance = len;
                info.shortest_paths.clear();
                info.shortest_paths.push_back(path);
            } else if (std::abs(len - info.distance) <= tol * std::max(1.0, info.distance)) {
                info.shortest_paths.push_back(path);
            }
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            const double w = net.weight(u, v);
            if (w <= 0.0 || used[v]) continue;
            const double nl = len + 1.0 / w;
            if (nl > info.distance + tol * std::max(1.0, info.distance) &&
                info.distance < std::numeric_limits<double>::infinity())
                continue;  // prune
            used[v] = true;
            path.push_back(v);
            dfs(v, nl);
            path.pop_back();
            used[v] = false;
        }
    };
    dfs(s, 0.0);
    return info;
}

inline double aspl(const WeightedNetwork& net) {
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j) {
            sum += all_shortest_paths(net, i, j).distance;
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

// Normalized betweenness from the enumerated shortest-path sets.
inline std::vector<double> betweenness(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    std::vector<double> b(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const auto info = all_shortest_paths(net, j, k);
            if (info.shortest_paths.empty()) continue;
            const auto total = static_cast<double>(info.shortest_paths.size());
            for (std::size_t i = 0; i < n; ++i) {
                if (i == j || i == k) continue;
                double through = 0.0;
                for (const auto& p : info.shortest_paths)
                    if (std::find(p.begin() + 1, p.end() - 1, i) != p.end() - 1) through += 1.0;
                b[i] += through / total;
            }
        }
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (double& x : b) x /= norm;
    return b;
}

// Direct triad enumeration of the weighted global clustering coefficient.
inline double gcc(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    double closed = 0.0, total = 0.0;
    for (std::size_t center = 0; center < n; ++center)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = i + 1; k < n; ++k) {
                if (i == center || k == center) continue;
                if (net.weight(center, i) <= 0.0 || net.weight(center, k) <= 0.0) continue;
                const double w = (net.weight(center, i) + net.weight(center, k)) / 2.0;
                total += w;
                if (net.weight(i, k) > 0.0) closed += w;
            }
    return closed / total;
}

// Two-pass Pearson over the explicit 2|E| orientation list.
inline double assortativity(const WeightedNetwork& net) {
    std::vector<double> xs, ys;
    const auto s = net.strengths();
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = 0; j < net.size(); ++j)
            if (i != j && net.weight(i, j) > 0.0) {
                xs.push_back(s[i]);
                ys.push_back(s[j]);
            }
    double mx = 0.0;
    for (double v : xs) mx += v;
    mx /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        num += (xs[k] - mx) * (ys[k] - mx);
        den += (xs[k] - mx) * (xs[k] - mx);
    }
    return num / den;
}

// Literal double sum over ordered pairs including the diagonal null term.
inline double modularity(const WeightedNetwork& net, const std::vector<int>& community) {
    double m = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j) m += net.weight(i, j);
    const double two_m = 2.0 * m;
    const auto s = net.strengths();
    double q = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = 0; j < net.size(); ++j)
            if (community[i] == community[j])
                q += net.weight(i, j) - s[i] * s[j] / two_m;
    return q / two_m;
}

// Exhaustive best-modularity partition over all set partitions (tiny n only).
inline std::pair<std::vector<int>, double> best_partition(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    std::vector<int> assignment(n, 0), best(n, 0);
    double best_q = -1e9;
    // restricted growth strings enumerate set partitions exactly once
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_used) {
        if (i == n) {
            const double q = modularity(net, assignment);
            if (q > best_q) {
                best_q = q;
                best = assignment;
            }
            return;
        }
        for (int c = 0; c <= max_used + 1; ++c) {
            assignment[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    rec(0, -1);
    return {best, best_q};
}

}  // namespace oracles
