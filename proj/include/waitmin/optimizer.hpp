#pragma once

// Exact integer minimizer of the mean waiting time over the threshold D.
//
// The search is exhaustive over 1..B; W(D) is O(1) to evaluate so even
// lambda/mu = 1e6 is cheap, and no unimodality is assumed.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "waitmin/analytic.hpp"
#include "waitmin/model.hpp"

namespace waitmin {

/// The minimum sits on the search boundary, so the true minimizer may lie
/// beyond it. Retry with a larger bound.
class BoundTooSmall : public std::runtime_error {
public:
    BoundTooSmall(long long bound, long long d_star)
        : std::runtime_error("search bound " + std::to_string(bound) +
                             " too small: W(D) still decreasing at the boundary (best D=" +
                             std::to_string(d_star) + "); retry with a larger bound"),
          bound_(bound) {}
    long long bound() const noexcept { return bound_; }

private:
    long long bound_;
};

struct OptimizeResult {
    long long d_star;
    double w_star;
    double w_baseline;  // W(1)
    double reduction;   // (w_baseline - w_star) / w_baseline
    long long d_heuristic;
    long long search_bound;
};

/// max(1, ceil(0.9 lambda/mu)). Computed as 9r/10 so exact multiples of ten
/// such as r = 1000 are not pushed over an integer by the rounding of 0.9.
inline long long heuristic_d_star(const ModelParams& p) {
    const double v = std::ceil(9.0 * p.load_ratio() / 10.0);
    return std::max(1LL, static_cast<long long>(v));
}

/// max(ceil(3 lambda/mu), 16).
inline long long default_search_bound(const ModelParams& p) {
    return std::max(16LL, static_cast<long long>(std::ceil(3.0 * p.load_ratio())));
}

inline OptimizeResult find_d_star(const ModelParams& p, std::optional<long long> search_bound = std::nullopt) {
    const long long bound = search_bound.value_or(default_search_bound(p));
    if (bound < 1) throw ValidationError("search bound must be >= 1, got " + std::to_string(bound));

    long long best_d = 1;
    double best_w = mean_wait(p, 1).w_bar;
    double w_at_bound = best_w;
    for (long long d = 2; d <= bound; ++d) {
        const double w = mean_wait(p, d).w_bar;
        if (w < best_w) {  // strict: ties keep the smaller D
            best_w = w;
            best_d = d;
        }
        if (d == bound) w_at_bound = w;
    }
    if (!(w_at_bound > best_w)) throw BoundTooSmall(bound, best_d);

    const double baseline = mean_wait_d1(p);
    // The general formula at D = 1 and the D = 1 closed form agree only to
    // about an ulp, so D* = 1 reports the baseline itself.
    if (best_d == 1) best_w = baseline;
    const double reduction = (baseline - best_w) / baseline;
    return {best_d, best_w, baseline, reduction, heuristic_d_star(p), bound};
}

}  // namespace waitmin
