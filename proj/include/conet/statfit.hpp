#pragma once
// Log-binned histograms and reference-distribution fits: continuous MLE for
// power-law tails and for the truncated exponential. Fits run on raw
// samples; binned output is presentation-only.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conet/common.hpp"

namespace conet {

struct BinnedHistogram {
    std::vector<double> edges;    // size bins+1, geometric
    std::vector<double> density;  // normalized by bin width and in-range sample count
    std::vector<std::size_t> counts;
    std::size_t excluded_nonpositive = 0;
};

inline BinnedHistogram log_binned_histogram(const std::vector<double>& samples,
                                            std::size_t bins = 30, double range_lo = 0.0,
                                            double range_hi = 0.0) {
    if (bins < 1) throw ConfigError("histogram needs at least 1 bin");
    std::vector<double> positive;
    BinnedHistogram h;
    for (double v : samples) {
        if (v > 0.0)
            positive.push_back(v);
        else
            ++h.excluded_nonpositive;
    }
    if (positive.empty()) throw DataError("no positive samples to bin");
    double lo = range_lo, hi = range_hi;
    if (!(lo > 0.0 && hi > lo)) {
        lo = *std::min_element(positive.begin(), positive.end());
        hi = *std::max_element(positive.begin(), positive.end());
        if (hi == lo) hi = lo * (1.0 + 1e-9);
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k)
        h.edges[k] = std::exp(llo + (lhi - llo) * static_cast<double>(k) / static_cast<double>(bins));
    h.edges.back() = hi;  // guard against rounding past the top edge
    h.counts.assign(bins, 0);
    std::size_t in_range = 0;
    for (double v : positive) {
        if (v < lo || v > hi) continue;
        auto b = static_cast<std::size_t>((std::log(v) - llo) / (lhi - llo) *
                                          static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        ++h.counts[b];
        ++in_range;
    }
    h.density.assign(bins, 0.0);
    if (in_range > 0)
        for (std::size_t b = 0; b < bins; ++b)
            h.density[b] = static_cast<double>(h.counts[b]) /
                           (static_cast<double>(in_range) * (h.edges[b + 1] - h.edges[b]));
    return h;
}

struct TailFit {
    double parameter = 0.0;  // alpha or lambda
    double ks_statistic = 0.0;
    std::size_t sample_count = 0;
};

// Continuous power-law tail MLE: alpha = 1 + n / sum ln(x_i / x_min),
// KS distance against the fitted tail CDF.
inline TailFit fit_power_law_tail(const std::vector<double>& samples, double x_min,
                                  std::size_t min_tail = 50) {
    if (x_min <= 0.0) throw ConfigError("x_min must be positive");
    std::vector<double> tail;
    for (double v : samples)
        if (v >= x_min) tail.push_back(v);
    if (tail.size() < min_tail)
        throw DataError("power-law tail too small: " + std::to_string(tail.size()) + " samples");
    double log_sum = 0.0;
    for (double v : tail) log_sum += std::log(v / x_min);
    if (log_sum <= 0.0) throw NumericError("degenerate tail: all samples at x_min");
    TailFit fit;
    fit.sample_count = tail.size();
    fit.parameter = 1.0 + static_cast<double>(tail.size()) / log_sum;

    std::sort(tail.begin(), tail.end());
    const double alpha = fit.parameter;
    double ks = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        const double model = 1.0 - std::pow(tail[i] / x_min, 1.0 - alpha);
        const double emp_hi = static_cast<double>(i + 1) / static_cast<double>(tail.size());
        const double emp_lo = static_cast<double>(i) / static_cast<double>(tail.size());
        ks = std::max({ks, std::abs(model - emp_hi), std::abs(model - emp_lo)});
    }
    fit.ks_statistic = ks;
    return fit;
}

namespace detail {

// Score function of the truncated exponential on [a,b]; strictly decreasing
// in lambda, so the MLE is the unique root.
inline double trunc_exp_score(double lambda, double mean, double a, double b) {
    if (lambda == 0.0) return (a + b) / 2.0 - mean;
    // expm1 form stays accurate as lambda -> 0, where the naive 1/lambda and
    // ratio terms cancel catastrophically
    const double L = b - a;
    const double em = std::expm1(-lambda * L);  // e^{-lambda L} - 1
    return 1.0 / lambda + (a - b * (1.0 + em)) / (-em) - mean;
}

}  // namespace detail

// MLE decay rate of the exponential truncated to [a,b]; the flat (uniform)
// limit lambda -> 0 is reported as lambda ~= 0.
inline TailFit fit_truncated_exponential(const std::vector<double>& samples, double a, double b,
                                         std::size_t min_samples = 20) {
    if (!(b > a)) throw ConfigError("invalid truncation range");
    std::vector<double> in_range;
    for (double v : samples)
        if (v >= a && v <= b) in_range.push_back(v);
    if (in_range.size() < min_samples)
        throw DataError("too few samples in range: " + std::to_string(in_range.size()));
    double mean = 0.0;
    for (double v : in_range) mean += v;
    mean /= static_cast<double>(in_range.size());

    TailFit fit;
    fit.sample_count = in_range.size();
    double lo = 1e-9, hi = 1.0;
    if (detail::trunc_exp_score(lo, mean, a, b) <= 0.0) {
        fit.parameter = 0.0;  // sample mean at or above midpoint: flat limit
    } else {
        while (detail::trunc_exp_score(hi, mean, a, b) > 0.0 && hi < 1e6) hi *= 2.0;
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            if (detail::trunc_exp_score(mid, mean, a, b) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        fit.parameter = 0.5 * (lo + hi);
    }

    std::sort(in_range.begin(), in_range.end());
    const double lambda = fit.parameter;
    auto cdf = [&](double x) {
        if (lambda <= 1e-12) return (x - a) / (b - a);
        const double ea = std::exp(-lambda * a), eb = std::exp(-lambda * b);
        return (ea - std::exp(-lambda * x)) / (ea - eb);
    };
    double ks = 0.0;
    for (std::size_t i = 0; i < in_range.size(); ++i) {
        const double model = cdf(in_range[i]);
        const double emp_hi = static_cast<double>(i + 1) / static_cast<double>(in_range.size());
        const double emp_lo = static_cast<double>(i) / static_cast<double>(in_range.size());
        ks = std::max({ks, std::abs(model - emp_hi), std::abs(model - emp_lo)});
    }
    fit.ks_statistic = ks;
    return fit;
}

}  // namespace conet
