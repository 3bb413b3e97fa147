#pragma once
// Weight-rewired reference networks and ensemble statistics (mean plus
// empirical 95% band) for scalar- or curve-valued observables.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "conet/common.hpp"
#include "conet/network.hpp"

namespace conet {

enum class RewireMode {
    AllPairs,       // weights swap between arbitrary node pairs; links relocate
    ExistingLinks,  // weights permute among currently linked pairs; topology fixed
};

// One swap: pick two distinct unordered node pairs and exchange their
// weights. Zero-weight pairs participate in AllPairs mode. The pair-weight
// multiset over all node pairs is exactly preserved.
inline WeightedNetwork rewire(const WeightedNetwork& net, std::size_t iterations,
                              std::uint64_t seed, RewireMode mode = RewireMode::AllPairs) {
    const std::size_t n = net.size();
    if (n < 2) throw DataError("rewire needs at least 2 nodes");
    WeightedNetwork out = net;
    Rng rng(seed);

    if (mode == RewireMode::AllPairs) {
        const std::uint64_t pair_count = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        auto unrank = [n](std::uint64_t k) {
            // row-major unranking of the strict upper triangle
            std::size_t i = 0;
            std::uint64_t row = n - 1;
            while (k >= row) {
                k -= row;
                --row;
                ++i;
            }
            return std::pair<std::size_t, std::size_t>{i, i + 1 + static_cast<std::size_t>(k)};
        };
        for (std::size_t it = 0; it < iterations; ++it) {
            const std::uint64_t a = rng.bounded(pair_count);
            std::uint64_t b = rng.bounded(pair_count - 1);
            if (b >= a) ++b;
            const auto [p, q] = unrank(a);
            const auto [u, v] = unrank(b);
            const double wa = out.weight(p, q);
            const double wb = out.weight(u, v);
            out.set_weight(p, q, wb);
            out.set_weight(u, v, wa);
        }
    } else {
        auto edges = net.edges();
        if (edges.size() >= 2) {
            for (std::size_t it = 0; it < iterations; ++it) {
                const std::uint64_t a = rng.bounded(edges.size());
                std::uint64_t b = rng.bounded(edges.size() - 1);
                if (b >= a) ++b;
                std::swap(edges[a].weight, edges[b].weight);
            }
        }
        WeightedNetwork permuted(net.nodes(), net.meta());
        for (const auto& e : edges) permuted.set_weight(e.i, e.j, e.weight);
        out = std::move(permuted);
    }
    return out;
}

// Default mixing heuristic: enough swaps to move every link several times.
inline std::size_t auto_swap_count(const WeightedNetwork& net) {
    return std::max<std::size_t>(100, 10 * net.edge_count());
}

struct EnsembleSpec {
    std::size_t replicates = 100;
    std::size_t swaps = 0;  // 0 = auto
    std::uint64_t seed = 42;
    RewireMode mode = RewireMode::AllPairs;
};

struct EnsembleBand {
    std::vector<double> mean;
    std::vector<double> lower;  // empirical 2.5%
    std::vector<double> upper;  // empirical 97.5%
    std::size_t replicates_used = 0;
    std::size_t failures = 0;
    std::vector<std::string> failure_messages;
};

// Empirical quantile with linear interpolation on the sorted sample.
inline double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw NumericError("quantile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

using CurveObservable = std::function<std::vector<double>(const WeightedNetwork&)>;

// Applies the observable to independently rewired replicates; each replicate
// derives its own generator stream from (seed, index), so evaluation order
// does not affect the result.
inline EnsembleBand ensemble_band(const WeightedNetwork& net, const EnsembleSpec& spec,
                                  const CurveObservable& observable) {
    if (spec.replicates < 1) throw ConfigError("ensemble needs at least 1 replicate");
    const std::size_t swaps = spec.swaps > 0 ? spec.swaps : auto_swap_count(net);
    std::vector<std::vector<double>> curves;
    EnsembleBand band;
    for (std::size_t r = 0; r < spec.replicates; ++r) {
        const std::uint64_t rep_seed = splitmix64(spec.seed ^ (0x9E3779B97F4A7C15ULL * (r + 1)));
        try {
            auto curve = observable(rewire(net, swaps, rep_seed, spec.mode));
            if (!curves.empty() && curve.size() != curves.front().size())
                throw NumericError("observable returned inconsistent curve length");
            curves.push_back(std::move(curve));
        } catch (const std::exception& e) {
            ++band.failures;
            band.failure_messages.emplace_back(e.what());
        }
    }
    if (curves.empty()) throw NumericError("all ensemble replicates failed");
    band.replicates_used = curves.size();
    const std::size_t points = curves.front().size();
    band.mean.resize(points);
    band.lower.resize(points);
    band.upper.resize(points);
    std::vector<double> column(curves.size());
    for (std::size_t k = 0; k < points; ++k) {
        double sum = 0.0;
        for (std::size_t r = 0; r < curves.size(); ++r) {
            column[r] = curves[r][k];
            sum += column[r];
        }
        band.mean[k] = sum / static_cast<double>(curves.size());
        band.lower[k] = quantile(column, 0.025);
        band.upper[k] = quantile(column, 0.975);
    }
    return band;
}

}  // namespace conet
