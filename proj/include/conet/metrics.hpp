#pragma once
// Global and node-level metrics of the weighted concept network: mean node
// strength, edge density, reciprocal-weight shortest paths, ASPL, weighted
// betweenness, weighted global clustering, strength assortativity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "conet/network.hpp"

namespace conet {

constexpr double kInfDistance = std::numeric_limits<double>::infinity();
// Relative tolerance for recognising equal-length shortest paths under
// floating-point length sums.
constexpr double kPathTieTol = 1e-9;

inline double mean_strength(const WeightedNetwork& net) {
    if (net.size() == 0) throw DataError("mean_strength on empty network");
    double sum = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) sum += net.strength(i);
    return sum / static_cast<double>(net.size());
}

inline double edge_density(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    if (n < 2) throw DataError("edge_density needs at least 2 nodes");
    return static_cast<double>(net.edge_count()) / (static_cast<double>(n) * (n - 1) / 2.0);
}

// Single-source Dijkstra with edge length 1/w_ij.
inline std::vector<double> shortest_paths_from(const WeightedNetwork& net, std::size_t source) {
    const std::size_t n = net.size();
    std::vector<double> dist(n, kInfDistance);
    std::vector<bool> done(n, false);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pq.emplace(0.0, source);
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        done[u] = true;
        for (std::size_t v = 0; v < n; ++v) {
            const double w = net.weight(u, v);
            if (w <= 0.0 || done[v]) continue;
            const double nd = d + 1.0 / w;
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return dist;
}

inline std::vector<std::vector<double>> shortest_paths(const WeightedNetwork& net) {
    std::vector<std::vector<double>> d(net.size());
    for (std::size_t s = 0; s < net.size(); ++s) d[s] = shortest_paths_from(net, s);
    return d;
}

inline bool is_connected(const WeightedNetwork& net) {
    if (net.size() == 0) return false;
    const auto d = shortest_paths_from(net, 0);
    return std::none_of(d.begin(), d.end(), [](double x) { return x == kInfDistance; });
}

// Nodes of the largest connected component on positive-weight edges.
inline std::vector<std::size_t> largest_component(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v)
                if (net.weight(u, v) > 0.0 && comp[v] == -1) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }
    std::vector<std::size_t> count(ncomp, 0);
    for (std::size_t i = 0; i < n; ++i) ++count[comp[i]];
    const int best = static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
        if (comp[i] == best) members.push_back(i);
    return members;
}

inline WeightedNetwork subnetwork(const WeightedNetwork& net, const std::vector<std::size_t>& keep) {
    std::vector<std::string> nodes;
    for (std::size_t i : keep) nodes.push_back(net.nodes()[i]);
    WeightedNetwork sub(nodes, net.meta());
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = a + 1; b < keep.size(); ++b) {
            const double w = net.weight(keep[a], keep[b]);
            if (w > 0.0) sub.set_weight(a, b, w);
        }
    return sub;
}

// Mean of d(i,j) over all unordered pairs. Disconnected networks are an
// error unless largest_component_only is set, in which case the mean is
// taken over LCC pairs and the caller should flag it in reports.
inline double aspl(const WeightedNetwork& net, bool largest_component_only = false) {
    const WeightedNetwork* target = &net;
    WeightedNetwork lcc_net;
    if (largest_component_only) {
        lcc_net = subnetwork(net, largest_component(net));
        target = &lcc_net;
    }
    const std::size_t n = target->size();
    if (n < 2) throw DataError("aspl needs at least 2 nodes");
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = shortest_paths_from(*target, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d[j] == kInfDistance) throw NumericError("aspl on disconnected network");
            sum += d[j];
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

// Brandes-style betweenness with shortest-path DAG built from tolerant
// distance comparison; normalized by (N-1)(N-2)/2.
inline std::vector<double> betweenness(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    std::vector<double> score(n, 0.0);
    if (n < 3) return score;
    for (std::size_t s = 0; s < n; ++s) {
        const auto dist = shortest_paths_from(net, s);
        std::vector<std::size_t> order;
        for (std::size_t v = 0; v < n; ++v)
            if (dist[v] < kInfDistance) order.push_back(v);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        std::vector<double> sigma(n, 0.0), delta(n, 0.0);
        sigma[s] = 1.0;
        // path counts in increasing distance
        for (std::size_t v : order) {
            if (v == s) continue;
            for (std::size_t u = 0; u < n; ++u) {
                const double w = net.weight(u, v);
                if (w <= 0.0 || dist[u] == kInfDistance) continue;
                const double len = dist[u] + 1.0 / w;
                if (std::abs(len - dist[v]) <= kPathTieTol * std::max(1.0, dist[v]))
                    sigma[v] += sigma[u];
            }
        }
        // dependency accumulation in decreasing distance
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t v = *it;
            if (v == s) continue;
            for (std::size_t u = 0; u < n; ++u) {
                const double w = net.weight(u, v);
                if (w <= 0.0 || dist[u] == kInfDistance) continue;
                const double len = dist[u] + 1.0 / w;
                if (std::abs(len - dist[v]) <= kPathTieTol * std::max(1.0, dist[v]))
                    delta[u] += sigma[u] / sigma[v] * (1.0 + delta[v]);
            }
            if (v != s) score[v] += delta[v];
        }
    }
    // each unordered pair was counted from both endpoints
    const double norm = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (double& x : score) x = x / 2.0 / norm;
    return score;
}

// Weighted global clustering: triad weight w_ijk = (w_ij + w_jk)/2 around
// center j; closed iff the outer pair is linked.
inline double gcc(const WeightedNetwork& net) {
    const std::size_t n = net.size();
    double closed = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::size_t> nbr;
        for (std::size_t v = 0; v < n; ++v)
            if (net.weight(j, v) > 0.0) nbr.push_back(v);
        for (std::size_t a = 0; a < nbr.size(); ++a)
            for (std::size_t b = a + 1; b < nbr.size(); ++b) {
                const double w = (net.weight(j, nbr[a]) + net.weight(j, nbr[b])) / 2.0;
                total += w;
                if (net.weight(nbr[a], nbr[b]) > 0.0) closed += w;
            }
    }
    if (total == 0.0) throw NumericError("GCC undefined: no triads");
    return closed / total;
}

// Pearson correlation of endpoint strengths over the reciprocal edge set
// (each undirected edge contributes both orientations). nullopt when the
// endpoint-strength variance vanishes.
inline std::optional<double> strength_assortativity(const WeightedNetwork& net) {
    const auto s = net.strengths();
    const auto edges = net.edges();
    if (edges.size() < 2) throw DataError("assortativity needs at least 2 edges");
    double mu = 0.0;
    for (const auto& e : edges) mu += s[e.i] + s[e.j];
    mu /= static_cast<double>(2 * edges.size());
    double num = 0.0, den = 0.0;
    for (const auto& e : edges) {
        num += 2.0 * (s[e.i] - mu) * (s[e.j] - mu);
        den += (s[e.i] - mu) * (s[e.i] - mu) + (s[e.j] - mu) * (s[e.j] - mu);
    }
    if (den == 0.0) return std::nullopt;
    return num / den;
}

struct RankedNode {
    std::string code;
    double value;
};

enum class RankKey { Strength, Betweenness };

inline std::vector<RankedNode> top_nodes(const WeightedNetwork& net, RankKey key, std::size_t k) {
    if (k < 1) throw ConfigError("top_nodes needs k >= 1");
    std::vector<double> values = key == RankKey::Strength ? net.strengths() : betweenness(net);
    std::vector<RankedNode> ranked;
    for (std::size_t i = 0; i < net.size(); ++i) ranked.push_back({net.nodes()[i], values[i]});
    std::sort(ranked.begin(), ranked.end(), [](const RankedNode& a, const RankedNode& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.code < b.code;  // documented tie rule
    });
    if (k < ranked.size()) ranked.resize(k);
    return ranked;
}

struct GlobalMetricsReport {
    double mean_strength = 0.0;
    double edge_density = 0.0;
    double aspl = 0.0;
    double gcc = 0.0;
    std::optional<double> assortativity;
    std::optional<double> modularity;  // filled by the community pass
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    bool aspl_largest_component_only = false;
    // Distance convention is fixed: edge length 1/w, no rescaling.
    static constexpr const char* distance_convention = "reciprocal-weight";
};

inline GlobalMetricsReport global_metrics(const WeightedNetwork& net,
                                          bool aspl_lcc_only = false) {
    GlobalMetricsReport r;
    r.node_count = net.size();
    r.edge_count = net.edge_count();
    r.mean_strength = mean_strength(net);
    r.edge_density = edge_density(net);
    r.aspl = aspl(net, aspl_lcc_only);
    r.aspl_largest_component_only = aspl_lcc_only;
    r.gcc = gcc(net);
    r.assortativity = strength_assortativity(net);
    return r;
}

}  // namespace conet
