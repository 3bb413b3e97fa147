#pragma once
// Louvain community detection on weighted networks, modularity evaluation,
// and first-level category strength aggregation.

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "conet/common.hpp"
#include "conet/corpus.hpp"
#include "conet/network.hpp"

namespace conet {

struct Partition {
    std::vector<int> community;  // node index -> community id (0-based, dense)
    int community_count = 0;
    double modularity = 0.0;
    std::uint64_t seed = 0;
};

// Q = 1/(2m) sum_{i,j} (w_ij - s_i s_j / 2m) delta(c_i, c_j), ordered pairs
// including i = j (the diagonal null term is what makes the singleton
// partition negative).
inline double eval_modularity(const WeightedNetwork& net, const std::vector<int>& community,
                              double resolution = 1.0) {
    if (community.size() != net.size()) throw DataError("partition does not cover all nodes");
    const double m = net.total_weight();
    if (m <= 0.0) throw NumericError("modularity undefined: zero total weight");
    const auto s = net.strengths();
    const double two_m = 2.0 * m;
    double q = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = 0; j < net.size(); ++j)
            if (community[i] == community[j])
                q += net.weight(i, j) - resolution * s[i] * s[j] / two_m;
    return q / two_m;
}

namespace detail {

// Aggregated graph used between Louvain levels; keeps self-loop weights.
struct LouvainGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // neighbor, weight
    std::vector<double> self_loop;
    std::vector<double> strength;  // incident weight + 2 * self_loop
    double two_m = 0.0;

    static LouvainGraph from_network(const WeightedNetwork& net) {
        LouvainGraph g;
        g.n = net.size();
        g.adj.resize(g.n);
        g.self_loop.assign(g.n, 0.0);
        g.strength.assign(g.n, 0.0);
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j) {
                const double w = net.weight(i, j);
                if (w > 0.0 && i != j) {
                    g.adj[i].emplace_back(j, w);
                    g.strength[i] += w;
                }
            }
        g.two_m = std::accumulate(g.strength.begin(), g.strength.end(), 0.0);
        return g;
    }
};

inline bool louvain_one_level(const LouvainGraph& g, std::vector<int>& node_comm, Rng& rng,
                              double resolution) {
    std::vector<double> comm_tot(g.n, 0.0);  // sum of strengths per community
    for (std::size_t i = 0; i < g.n; ++i) comm_tot[node_comm[i]] += g.strength[i];

    std::vector<std::size_t> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = g.n; i > 1; --i)  // Fisher-Yates with the seeded stream
        std::swap(order[i - 1], order[rng.bounded(i)]);

    bool improved_any = false;
    bool moved = true;
    std::vector<double> link_to(g.n, 0.0);
    while (moved) {
        moved = false;
        for (std::size_t u : order) {
            const int old_comm = node_comm[u];
            std::vector<int> touched;
            for (const auto& [v, w] : g.adj[u]) {
                const int c = node_comm[v];
                if (link_to[c] == 0.0) touched.push_back(c);
                link_to[c] += w;
            }
            if (link_to[old_comm] == 0.0) touched.push_back(old_comm);

            comm_tot[old_comm] -= g.strength[u];
            int best_comm = old_comm;
            double best_gain = link_to[old_comm] - resolution * comm_tot[old_comm] * g.strength[u] / g.two_m;
            for (int c : touched) {
                const double gain = link_to[c] - resolution * comm_tot[c] * g.strength[u] / g.two_m;
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_comm = c;
                } else if (std::abs(gain - best_gain) <= 1e-12 && c < best_comm) {
                    best_comm = c;  // deterministic tie break
                }
            }
            comm_tot[best_comm] += g.strength[u];
            if (best_comm != old_comm) {
                node_comm[u] = best_comm;
                moved = true;
                improved_any = true;
            }
            for (int c : touched) link_to[c] = 0.0;
        }
    }
    return improved_any;
}

inline LouvainGraph aggregate(const LouvainGraph& g, const std::vector<int>& node_comm,
                              std::vector<int>& renumbered) {
    // renumber communities densely
    std::vector<int> remap(g.n, -1);
    int next = 0;
    renumbered.assign(g.n, -1);
    for (std::size_t i = 0; i < g.n; ++i) {
        if (remap[node_comm[i]] == -1) remap[node_comm[i]] = next++;
        renumbered[i] = remap[node_comm[i]];
    }
    LouvainGraph out;
    out.n = static_cast<std::size_t>(next);
    out.adj.resize(out.n);
    out.self_loop.assign(out.n, 0.0);
    out.strength.assign(out.n, 0.0);
    std::vector<std::map<std::size_t, double>> acc(out.n);
    for (std::size_t u = 0; u < g.n; ++u) {
        const auto cu = static_cast<std::size_t>(renumbered[u]);
        out.self_loop[cu] += g.self_loop[u];
        for (const auto& [v, w] : g.adj[u]) {
            const auto cv = static_cast<std::size_t>(renumbered[v]);
            if (cu == cv) {
                if (u < v) out.self_loop[cu] += w;
            } else {
                acc[cu][cv] += w;
            }
        }
    }
    for (std::size_t c = 0; c < out.n; ++c)
        for (const auto& [d, w] : acc[c]) out.adj[c].emplace_back(d, w);
    for (std::size_t c = 0; c < out.n; ++c) {
        out.strength[c] = 2.0 * out.self_loop[c];
        for (const auto& [d, w] : out.adj[c]) out.strength[c] += w;
    }
    out.two_m = std::accumulate(out.strength.begin(), out.strength.end(), 0.0);
    return out;
}

}  // namespace detail

// Seeded Louvain: node-move sweeps in seeded shuffled order, then community
// aggregation, repeated until no further improvement. Deterministic per seed.
inline Partition louvain(const WeightedNetwork& net, std::uint64_t seed = 42,
                         double resolution = 1.0) {
    if (net.total_weight() <= 0.0) throw NumericError("louvain needs positive total weight");
    Rng rng(seed);
    auto g = detail::LouvainGraph::from_network(net);
    std::vector<int> assignment(net.size());
    std::iota(assignment.begin(), assignment.end(), 0);
    double prev_q = eval_modularity(net, assignment, resolution);

    while (true) {
        std::vector<int> node_comm(g.n);
        std::iota(node_comm.begin(), node_comm.end(), 0);
        const bool improved = detail::louvain_one_level(g, node_comm, rng, resolution);
        if (!improved) break;
        std::vector<int> renumbered;
        g = detail::aggregate(g, node_comm, renumbered);
        for (auto& c : assignment) c = renumbered[c];
        const double q = eval_modularity(net, assignment, resolution);
        if (q < prev_q - 1e-12) throw NumericError("louvain phase decreased modularity");
        if (q - prev_q < 1e-12) break;
        prev_q = q;
    }

    // densify ids in first-appearance order for stable output
    Partition p;
    p.community.assign(net.size(), -1);
    std::map<int, int> remap;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto it = remap.emplace(assignment[i], static_cast<int>(remap.size())).first;
        p.community[i] = it->second;
    }
    p.community_count = static_cast<int>(remap.size());
    p.modularity = eval_modularity(net, p.community, resolution);
    p.seed = seed;
    return p;
}

// Best-of-n restarts; ties resolved toward the lowest seed.
inline Partition louvain_multi(const WeightedNetwork& net, std::uint64_t base_seed,
                               std::size_t runs, double resolution = 1.0) {
    if (runs < 1) throw ConfigError("louvain_multi needs at least one run");
    Partition best;
    bool have = false;
    for (std::size_t r = 0; r < runs; ++r) {
        Partition p = louvain(net, base_seed + r, resolution);
        if (!have || p.modularity > best.modularity + 1e-15) {
            best = std::move(p);
            have = true;
        }
    }
    return best;
}

struct CategoryStrength {
    double total = 0.0;
    double intra = 0.0;
    double inter = 0.0;
};

// Aggregate link weights at the first hierarchy level. An intra edge counts
// once toward its category; an inter edge counts once toward each endpoint
// category's inter strength.
inline std::map<std::string, CategoryStrength> category_strengths(const WeightedNetwork& net) {
    std::map<std::string, CategoryStrength> out;
    for (const auto& code : net.nodes()) out[first_level_category(code)];
    for (const auto& e : net.edges()) {
        const std::string ci = first_level_category(net.nodes()[e.i]);
        const std::string cj = first_level_category(net.nodes()[e.j]);
        if (ci == cj) {
            out[ci].intra += e.weight;
        } else {
            out[ci].inter += e.weight;
            out[cj].inter += e.weight;
        }
    }
    for (auto& [name, s] : out) s.total = s.intra + s.inter;
    return out;
}

}  // namespace conet
