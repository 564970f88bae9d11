#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "interface_lab/errors.hpp"

namespace interface_lab {

struct SummaryStat {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
};

/// Mean, unbiased standard deviation, standard error and 95% normal interval.
/// Sums run in index order, so the result depends only on the sample sequence.
inline SummaryStat summarize(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw InsufficientDataError("summarize needs at least two samples");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double se = sd / std::sqrt(static_cast<double>(n));
    return {n, mean, sd, se, mean - 1.96 * se, mean + 1.96 * se};
}

/// Standard error of the difference of two independent estimates.
inline double pooled_se(double se_a, double se_b) noexcept { return std::sqrt(se_a * se_a + se_b * se_b); }

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
/// samples and a continuous CDF.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InsufficientDataError("ks_distance needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Empirical quantile with linear interpolation between order statistics.
inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw InsufficientDataError("quantile of an empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace interface_lab
