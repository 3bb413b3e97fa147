#pragma once
// Shared test fixtures: seeded random networks, planted-structure graphs,
// and a synthetic corpus generator that writes its own ledger.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "conet/common.hpp"
#include "conet/corpus.hpp"
#include "conet/network.hpp"

namespace fixtures {

using conet::Rng;
using conet::WeightedNetwork;

inline std::vector<std::string> make_codes(std::size_t n, const std::string& prefix = "C") {
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%02zu.%03zu", prefix.c_str(), i / 10 + 1, 100 + i);
        codes.emplace_back(buf);
    }
    return codes;
}

// Erdos-Renyi-style weighted graph with uniform weights in (lo, hi].
inline WeightedNetwork random_network(std::size_t n, double edge_prob, std::uint64_t seed,
                                      double lo = 0.05, double hi = 1.0) {
    Rng rng(seed);
    WeightedNetwork net(make_codes(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) net.set_weight(i, j, rng.uniform(lo, hi));
    return net;
}

inline WeightedNetwork connected_random_network(std::size_t n, double edge_prob,
                                                std::uint64_t seed, double lo = 0.05,
                                                double hi = 1.0) {
    Rng rng(seed);
    WeightedNetwork net(make_codes(n));
    for (std::size_t i = 1; i < n; ++i)  // random spanning tree first
        net.set_weight(i, rng.bounded(i), rng.uniform(lo, hi));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (net.weight(i, j) == 0.0 && rng.uniform() < edge_prob)
                net.set_weight(i, j, rng.uniform(lo, hi));
    return net;
}

// Two disjoint unit-weight triangles on 6 nodes.
inline WeightedNetwork two_triangles() {
    WeightedNetwork net(make_codes(6));
    for (std::size_t base : {std::size_t{0}, std::size_t{3}}) {
        net.set_weight(base, base + 1, 1.0);
        net.set_weight(base + 1, base + 2, 1.0);
        net.set_weight(base, base + 2, 1.0);
    }
    return net;
}

// 4 planted blocks on 50 nodes: intra-block weight 0.3, inter-block 0.02.
inline std::pair<WeightedNetwork, std::vector<int>> planted_partition() {
    const std::size_t n = 50;
    std::vector<int> block(n);
    for (std::size_t i = 0; i < n; ++i) block[i] = static_cast<int>(i % 4);
    WeightedNetwork net(make_codes(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            net.set_weight(i, j, block[i] == block[j] ? 0.3 : 0.02);
    return {net, block};
}

// Core-periphery fixture: an 8-node strong clique (weights in [0.5, 0.9])
// plus a weak periphery whose edges all carry weight exactly 0.05, so the
// whole fringe strips in one grid step.
struct CorePeriphery {
    WeightedNetwork net;
    std::vector<std::string> core_codes;  // sorted
};

inline CorePeriphery core_periphery(std::size_t periphery = 28, std::uint64_t seed = 5) {
    Rng rng(seed);
    const std::size_t n = 8 + periphery;
    WeightedNetwork net(make_codes(n));
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = i + 1; j < 8; ++j) net.set_weight(i, j, rng.uniform(0.5, 0.9));
    for (std::size_t p = 0; p < periphery; ++p) {
        const std::size_t v = 8 + p;
        net.set_weight(v, 8 + (p + 1) % periphery, 0.05);  // fringe ring
        net.set_weight(v, rng.bounded(8), 0.05);           // weak attachment to the core
    }
    CorePeriphery out{std::move(net), {}};
    for (std::size_t i = 0; i < 8; ++i) out.core_codes.push_back(out.net.nodes()[i]);
    std::sort(out.core_codes.begin(), out.core_codes.end());
    return out;
}

// Synthetic corpus: the generator keeps a ledger of everything ingest and
// counting must reproduce.
struct CorpusLedger {
    std::map<int, std::size_t> per_year;
    std::map<std::pair<int, int>, std::size_t> per_year_month;  // (year, month)
    std::size_t june_ni_count = 0;
    std::vector<conet::DocumentRecord> documents;
    std::vector<std::string> universe;
    std::string corpus_tsv;
    std::string ranking_tsv;
};

inline CorpusLedger synthetic_corpus(std::size_t docs = 2000, std::uint64_t seed = 11,
                                     const std::vector<int>& years = {1999},
                                     std::size_t journals = 40, std::size_t concepts = 36) {
    Rng rng(seed);
    CorpusLedger ledger;
    ledger.universe = make_codes(concepts);

    std::ostringstream ranking;
    std::vector<std::string> journal_ids;
    for (std::size_t j = 0; j < journals; ++j) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "J%03zu", j);
        journal_ids.emplace_back(buf);
        const double pct = (static_cast<double>(j) + 0.5) / static_cast<double>(journals);
        for (int y : years)
            ranking << y << '\t' << buf << '\t' << pct << '\n';
    }
    ledger.ranking_tsv = ranking.str();

    // a loose block structure so the resulting networks are not featureless
    std::ostringstream corpus;
    for (std::size_t d = 0; d < docs; ++d) {
        conet::DocumentRecord rec;
        rec.doc_id = "D" + std::to_string(100000 + d);
        rec.year = years[rng.bounded(years.size())];
        rec.month = static_cast<int>(rng.bounded(12)) + 1;
        rec.journal_id = journal_ids[rng.bounded(journals)];
        const std::size_t block = rng.bounded(4);
        const std::size_t k = 2 + rng.bounded(5);
        while (rec.concepts.size() < k) {
            const bool in_block = rng.uniform() < 0.7;
            const std::size_t span = concepts / 4;
            const std::size_t idx = in_block ? block * span + rng.bounded(span)
                                             : rng.bounded(concepts);
            rec.concepts.insert(ledger.universe[idx]);
        }
        ++ledger.per_year[rec.year];
        ++ledger.per_year_month[{rec.year, rec.month}];
        const std::size_t jnum = static_cast<std::size_t>(
            std::stoi(rec.journal_id.substr(1)));
        const double pct = (static_cast<double>(jnum) + 0.5) / static_cast<double>(journals);
        if (rec.month == 6 && pct > 0.10) ++ledger.june_ni_count;
        corpus << rec.doc_id << '\t' << rec.year << '\t' << rec.month << '\t' << rec.journal_id
               << '\t';
        bool first = true;
        for (const auto& c : rec.concepts) {
            if (!first) corpus << ',';
            corpus << c;
            first = false;
        }
        corpus << '\n';
        ledger.documents.push_back(std::move(rec));
    }
    ledger.corpus_tsv = corpus.str();
    return ledger;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    out << content;
}

}  // namespace fixtures
