#pragma once
// Co-occurrence counting, cosine normalization, and the dense symmetric
// weighted network that every downstream analysis consumes.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <unordered_map>
#include <vector>

#include "conet/common.hpp"
#include "conet/corpus.hpp"

namespace conet {

struct NetworkMeta {
    std::string tier;
    int year = 0;
    std::size_t doc_count = 0;
    std::vector<std::string> zero_frequency_nodes;
};

struct Edge {
    std::size_t i, j;  // i < j
    double weight;
};

// Undirected weighted graph over a fixed ordered node universe.
// Dense symmetric storage, zero diagonal, weights in [0,1] for cosine nets.
class WeightedNetwork {
public:
    WeightedNetwork() = default;
    WeightedNetwork(std::vector<std::string> nodes, NetworkMeta meta = {})
        : nodes_(std::move(nodes)), meta_(std::move(meta)), w_(nodes_.size() * nodes_.size(), 0.0) {
        for (std::size_t i = 0; i < nodes_.size(); ++i) index_.emplace(nodes_[i], i);
    }

    std::size_t size() const { return nodes_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const NetworkMeta& meta() const { return meta_; }
    NetworkMeta& meta() { return meta_; }

    std::size_t index_of(const std::string& code) const {
        auto it = index_.find(code);
        if (it == index_.end()) throw DataError("unknown node: " + code);
        return it->second;
    }
    bool has_node(const std::string& code) const { return index_.count(code) != 0; }

    double weight(std::size_t i, std::size_t j) const { return w_[i * size() + j]; }

    void set_weight(std::size_t i, std::size_t j, double v) {
        if (i == j) throw DataError("self-loops are not representable");
        if (v < 0.0) throw DataError("negative weight");
        w_[i * size() + j] = v;
        w_[j * size() + i] = v;
    }

    double strength(std::size_t i) const {
        double s = 0.0;
        for (std::size_t j = 0; j < size(); ++j) s += w_[i * size() + j];
        return s;
    }

    std::vector<double> strengths() const {
        std::vector<double> s(size());
        for (std::size_t i = 0; i < size(); ++i) s[i] = strength(i);
        return s;
    }

    // m = sum of link weights over unordered pairs
    double total_weight() const {
        double m = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j) m += weight(i, j);
        return m;
    }

    std::size_t edge_count() const {
        std::size_t e = 0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (weight(i, j) > 0.0) ++e;
        return e;
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (weight(i, j) > 0.0) out.push_back({i, j, weight(i, j)});
        return out;
    }

    double max_weight() const {
        double m = 0.0;
        for (double v : w_) m = std::max(m, v);
        return m;
    }

    bool same_nodes(const WeightedNetwork& other) const { return nodes_ == other.nodes_; }

    WeightedNetwork scaled(double factor) const {
        WeightedNetwork out(nodes_, meta_);
        for (std::size_t k = 0; k < w_.size(); ++k) out.w_[k] = w_[k] * factor;
        return out;
    }

    bool operator==(const WeightedNetwork& other) const {
        return nodes_ == other.nodes_ && w_ == other.w_;
    }

private:
    std::vector<std::string> nodes_;
    NetworkMeta meta_;
    std::vector<double> w_;
    std::unordered_map<std::string, std::size_t> index_;
};

// Symmetric integer co-occurrence counts; c_ii = documents indexing term i.
class CooccurrenceCounts {
public:
    explicit CooccurrenceCounts(std::vector<std::string> universe)
        : universe_(std::move(universe)), c_(universe_.size() * universe_.size(), 0) {
        if (universe_.empty()) throw DataError("empty concept universe");
        for (std::size_t i = 0; i < universe_.size(); ++i) index_.emplace(universe_[i], i);
    }

    std::size_t size() const { return universe_.size(); }
    const std::vector<std::string>& universe() const { return universe_; }

    std::uint64_t count(std::size_t i, std::size_t j) const { return c_[i * size() + j]; }

    void add_document(const std::set<std::string>& concepts) {
        std::vector<std::size_t> idx;
        for (const auto& code : concepts) {
            auto it = index_.find(code);
            if (it != index_.end()) idx.push_back(it->second);  // out-of-universe ignored
        }
        for (std::size_t a = 0; a < idx.size(); ++a) {
            ++c_[idx[a] * size() + idx[a]];
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                ++c_[idx[a] * size() + idx[b]];
                ++c_[idx[b] * size() + idx[a]];
            }
        }
    }

    void check_invariants() const {
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j) {
                if (count(i, j) != count(j, i)) throw NumericError("count matrix asymmetry");
                if (count(i, j) > std::min(count(i, i), count(j, j)))
                    throw NumericError("pair count exceeds marginal count");
            }
    }

private:
    std::vector<std::string> universe_;
    std::vector<std::uint64_t> c_;
    std::unordered_map<std::string, std::size_t> index_;
};

inline CooccurrenceCounts count_cooccurrences(const CorpusView& view,
                                              const std::vector<std::string>& universe) {
    CooccurrenceCounts counts(universe);
    for (const DocumentRecord* rec : view.records) counts.add_document(rec->concepts);
    return counts;
}

// w_ij = c_ij / sqrt(c_ii c_jj), zero when either marginal vanishes.
inline WeightedNetwork cosine_normalize(const CooccurrenceCounts& counts, NetworkMeta meta = {}) {
    counts.check_invariants();
    WeightedNetwork net(counts.universe(), std::move(meta));
    const std::size_t n = counts.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (counts.count(i, i) == 0)
            net.meta().zero_frequency_nodes.push_back(counts.universe()[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double denom = static_cast<double>(counts.count(i, i)) *
                                 static_cast<double>(counts.count(j, j));
            if (denom > 0.0 && counts.count(i, j) > 0) {
                const double w = static_cast<double>(counts.count(i, j)) / std::sqrt(denom);
                assert(w <= 1.0 + 1e-12);
                net.set_weight(i, j, std::min(w, 1.0));
            }
        }
    }
    return net;
}

struct PruneResult {
    std::vector<WeightedNetwork> networks;
    std::vector<std::string> removed;
};

// Drop nodes whose strength is zero in every supplied snapshot; all outputs
// share the reduced node order.
inline PruneResult prune_shared_isolates(const std::vector<WeightedNetwork>& nets) {
    if (nets.empty()) throw DataError("no networks to prune");
    for (const auto& net : nets)
        if (!net.same_nodes(nets.front())) throw DataError("node universe mismatch across snapshots");

    const std::size_t n = nets.front().size();
    std::vector<bool> keep(n, false);
    for (const auto& net : nets)
        for (std::size_t i = 0; i < n; ++i)
            if (!keep[i] && net.strength(i) > 0.0) keep[i] = true;

    PruneResult result;
    std::vector<std::size_t> kept_idx;
    std::vector<std::string> kept_nodes;
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i]) {
            kept_idx.push_back(i);
            kept_nodes.push_back(nets.front().nodes()[i]);
        } else {
            result.removed.push_back(nets.front().nodes()[i]);
        }
    }
    for (const auto& net : nets) {
        WeightedNetwork pruned(kept_nodes, net.meta());
        pruned.meta().zero_frequency_nodes.clear();
        for (std::size_t a = 0; a < kept_idx.size(); ++a)
            for (std::size_t b = a + 1; b < kept_idx.size(); ++b) {
                const double w = net.weight(kept_idx[a], kept_idx[b]);
                if (w > 0.0) pruned.set_weight(a, b, w);
            }
        result.networks.push_back(std::move(pruned));
    }
    return result;
}

}  // namespace conet
