#pragma once
// Signed difference networks between tiers, link co-location regression,
// and the dual power-law scaling of differences against reference weights.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conet/network.hpp"

namespace conet {

struct SignedDifferenceNetworks {
    WeightedNetwork positive;  // max(wA - wB, 0)
    WeightedNetwork negative;  // max(wB - wA, 0)
    double normalization = 1.0;  // reference mean link strength applied, 1 if raw
};

inline double mean_link_strength(const WeightedNetwork& net) {
    const auto edges = net.edges();
    if (edges.empty()) throw NumericError("mean link strength of an empty network");
    double sum = 0.0;
    for (const auto& e : edges) sum += e.weight;
    return sum / static_cast<double>(edges.size());
}

// Elementwise signed split of wA - wB. When normalize is set, both inputs are
// first divided by netA's mean positive link strength, so outputs read as
// fractions of that mean.
inline SignedDifferenceNetworks signed_difference(const WeightedNetwork& a,
                                                  const WeightedNetwork& b,
                                                  bool normalize = false) {
    if (!a.same_nodes(b)) throw DataError("signed_difference: node sets differ");
    SignedDifferenceNetworks diff;
    diff.normalization = normalize ? mean_link_strength(a) : 1.0;
    NetworkMeta pos_meta = a.meta();
    pos_meta.tier = "diff+";
    NetworkMeta neg_meta = a.meta();
    neg_meta.tier = "diff-";
    diff.positive = WeightedNetwork(a.nodes(), pos_meta);
    diff.negative = WeightedNetwork(a.nodes(), neg_meta);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double d = (a.weight(i, j) - b.weight(i, j)) / diff.normalization;
            if (d > 0.0) diff.positive.set_weight(i, j, d);
            if (d < 0.0) diff.negative.set_weight(i, j, -d);
        }
    return diff;
}

struct RegressionBin {
    double x_center = 0.0;
    double y_mean = 0.0;
    double y_stderr = 0.0;
    std::size_t count = 0;
};

struct ColocationRegression {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool degenerate = false;  // undefined slope: x varies but regression is ill-posed
    std::size_t sample_count = 0;
    std::vector<RegressionBin> bins;
};

namespace detail {

inline ColocationRegression ols(const std::vector<double>& x, const std::vector<double>& y,
                                std::size_t bin_count = 20) {
    if (x.size() < 2) throw DataError("regression needs at least 2 samples");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    // constant inputs detected exactly, not via the rounded moment sums
    const auto [y_lo, y_hi] = std::minmax_element(y.begin(), y.end());
    if (*y_lo == *y_hi) syy = 0.0;
    const auto [x_lo, x_hi] = std::minmax_element(x.begin(), x.end());
    if (*x_lo == *x_hi) sxx = 0.0;
    ColocationRegression reg;
    reg.sample_count = x.size();
    if (syy == 0.0) {
        // flat response: slope 0 regardless of x spread
        reg.slope = 0.0;
        reg.intercept = my;
        reg.r_squared = 0.0;
    } else if (sxx == 0.0) {
        reg.degenerate = true;
    } else {
        reg.slope = sxy / sxx;
        reg.intercept = my - reg.slope * mx;
        reg.r_squared = sxy * sxy / (sxx * syy);
    }

    // log-spaced bin means over x (presentation output)
    const double xmin = *std::min_element(x.begin(), x.end());
    const double xmax = *std::max_element(x.begin(), x.end());
    if (xmin > 0.0 && xmax > xmin) {
        const double lmin = std::log(xmin), lmax = std::log(xmax);
        std::vector<std::vector<double>> buckets(bin_count);
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto b = static_cast<std::size_t>((std::log(x[i]) - lmin) / (lmax - lmin) *
                                              static_cast<double>(bin_count));
            if (b >= bin_count) b = bin_count - 1;
            buckets[b].push_back(y[i]);
        }
        for (std::size_t b = 0; b < bin_count; ++b) {
            if (buckets[b].empty()) continue;
            RegressionBin bin;
            bin.count = buckets[b].size();
            bin.x_center = std::exp(lmin + (lmax - lmin) * (static_cast<double>(b) + 0.5) /
                                              static_cast<double>(bin_count));
            double sum = 0.0;
            for (double v : buckets[b]) sum += v;
            bin.y_mean = sum / static_cast<double>(bin.count);
            double var = 0.0;
            for (double v : buckets[b]) var += (v - bin.y_mean) * (v - bin.y_mean);
            if (bin.count > 1)
                bin.y_stderr = std::sqrt(var / static_cast<double>(bin.count - 1) /
                                         static_cast<double>(bin.count));
            reg.bins.push_back(bin);
        }
    }
    return reg;
}

}  // namespace detail

enum class ColocationMode { PosPos, NegNeg, PosNeg, NegPos };

// Ordered (focal link, neighboring link) strength pairs. Two links are
// adjacent iff they share exactly one endpoint; within one network both
// orientations of every adjacency are emitted, so the sample is symmetric.
inline void colocation_samples(const WeightedNetwork& focal_net,
                               const WeightedNetwork& neighbor_net,
                               std::vector<double>& x, std::vector<double>& y) {
    if (!focal_net.same_nodes(neighbor_net)) throw DataError("colocation: node sets differ");
    const auto focal = focal_net.edges();
    const auto nbrs = neighbor_net.edges();
    std::vector<std::vector<std::size_t>> incident(neighbor_net.size());
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
        incident[nbrs[k].i].push_back(k);
        incident[nbrs[k].j].push_back(k);
    }
    const bool same_net = &focal_net == &neighbor_net || focal_net == neighbor_net;
    for (const auto& e : focal) {
        for (std::size_t endpoint : {e.i, e.j}) {
            for (std::size_t k : incident[endpoint]) {
                const auto& f = nbrs[k];
                if (same_net && f.i == e.i && f.j == e.j) continue;  // not its own neighbor
                // exactly-one-shared-endpoint is automatic for distinct pairs
                x.push_back(e.weight);
                y.push_back(f.weight);
            }
        }
    }
}

inline ColocationRegression colocation_regression(const WeightedNetwork& focal_net,
                                                  const WeightedNetwork& neighbor_net) {
    std::vector<double> x, y;
    colocation_samples(focal_net, neighbor_net, x, y);
    if (x.size() < 2) throw DataError("colocation: fewer than 2 adjacent link pairs");
    return detail::ols(x, y);
}

inline ColocationRegression colocation_regression(const SignedDifferenceNetworks& diff,
                                                  ColocationMode mode) {
    switch (mode) {
        case ColocationMode::PosPos: return colocation_regression(diff.positive, diff.positive);
        case ColocationMode::NegNeg: return colocation_regression(diff.negative, diff.negative);
        case ColocationMode::PosNeg: return colocation_regression(diff.positive, diff.negative);
        default: return colocation_regression(diff.negative, diff.positive);
    }
}

struct PowerLawFit {
    double exponent = 0.0;   // alpha in d ~ c * w^alpha
    double amplitude = 0.0;  // c
    double r_squared = 0.0;
    std::size_t points = 0;
    std::size_t excluded_zero = 0;  // zero-difference pairs dropped from the log fit
};

// Log-log OLS of diff values against reference weights over (w, d) pairs
// with both entries positive.
inline PowerLawFit fit_scaling(const std::vector<std::pair<double, double>>& samples) {
    std::vector<double> lx, ly;
    std::size_t excluded = 0;
    for (const auto& [w, d] : samples) {
        if (w > 0.0 && d > 0.0) {
            lx.push_back(std::log(w));
            ly.push_back(std::log(d));
        } else {
            ++excluded;
        }
    }
    if (lx.size() < 3) throw DataError("scaling fit needs at least 3 positive points");
    const auto reg = detail::ols(lx, ly, 1);
    if (reg.degenerate) throw NumericError("scaling fit: degenerate reference weights");
    PowerLawFit fit;
    fit.exponent = reg.slope;
    fit.amplitude = std::exp(reg.intercept);
    fit.r_squared = reg.r_squared;
    fit.points = lx.size();
    fit.excluded_zero = excluded;
    return fit;
}

struct DualScaling {
    PowerLawFit positive;
    PowerLawFit negative;
};

// Pairs each reference link weight with the corresponding positive and
// negative differences; callers may pool samples across years before fitting.
inline void scaling_samples(const SignedDifferenceNetworks& diff, const WeightedNetwork& reference,
                            std::vector<std::pair<double, double>>& pos,
                            std::vector<std::pair<double, double>>& neg) {
    if (!reference.same_nodes(diff.positive)) throw DataError("scaling: node sets differ");
    for (std::size_t i = 0; i < reference.size(); ++i)
        for (std::size_t j = i + 1; j < reference.size(); ++j) {
            const double w = reference.weight(i, j);
            if (w <= 0.0) continue;
            const double dp = diff.positive.weight(i, j);
            const double dn = diff.negative.weight(i, j);
            if (dp > 0.0) pos.emplace_back(w, dp);
            if (dn > 0.0) neg.emplace_back(w, dn);
        }
}

inline DualScaling diff_vs_reference_scaling(const SignedDifferenceNetworks& diff,
                                             const WeightedNetwork& reference) {
    std::vector<std::pair<double, double>> pos, neg;
    scaling_samples(diff, reference, pos, neg);
    return {fit_scaling(pos), fit_scaling(neg)};
}

}  // namespace conet
