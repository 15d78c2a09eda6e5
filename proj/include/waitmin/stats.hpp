#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>

#include <boost/math/distributions/students_t.hpp>

namespace waitmin::stats {

/// Two-sided 95% Student-t critical value, t_{0.975, df}.
inline double t_critical_975(std::size_t df) {
    boost::math::students_t dist(static_cast<double>(df));
    return boost::math::quantile(dist, 0.975);
}

struct MeanCi {
    double mean;
    double half_width;
};

/// Mean of `samples` with a 95% t-interval treating them as i.i.d.
/// (batch means or replication means). Needs at least two samples.
inline MeanCi mean_with_ci(std::span<const double> samples) {
    const auto n = samples.size();
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, t_critical_975(n - 1) * std::sqrt(var / static_cast<double>(n))};
}

}  // namespace waitmin::stats
