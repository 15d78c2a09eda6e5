#pragma once

// Closed-form stationary analysis of the Wait-Min(D) queue.
//
// States: N_i (miner busy, i queued, i >= 0) and M_i (miner idle, i queued,
// 0 <= i < D). Flow balance gives
//
//   Pi_N(i) = rho^i * Pi_N(0)
//   Pi_M(i) = ((lambda+mu)/lambda - rho^i) * Pi_N(0)
//   Pi_N(0) = 1 / ( D (lambda+mu)/lambda + ((lambda+mu)/mu) rho^D )
//
// with rho = lambda/(lambda+mu). The waiting time of a transaction ends when
// the block containing it starts mining, so Little's law applies to the pool
// alone: W = L / lambda.

#include <cmath>
#include <string>

#include "waitmin/model.hpp"

namespace waitmin {

namespace detail {

inline void require_threshold(long long d) { (void)Policy{d}; }

/// rho^n as exp(n ln rho), with ln rho = -log1p(mu/lambda). Stays accurate for
/// n up to ~1e6 and underflows cleanly to 0 beyond that.
inline double rho_pow(const ModelParams& p, double n) {
    return std::exp(-n * std::log1p(p.mu() / p.lambda()));
}

}  // namespace detail

inline double pi_n0(const ModelParams& p, long long d) {
    detail::require_threshold(d);
    const double a = 1.0 + p.mu() / p.lambda();  // (lambda+mu)/lambda
    const double b = 1.0 + p.lambda() / p.mu();  // (lambda+mu)/mu
    return 1.0 / (static_cast<double>(d) * a + b * detail::rho_pow(p, static_cast<double>(d)));
}

class StationaryDistribution {
public:
    StationaryDistribution(const ModelParams& params, long long d)
        : params_(params), d_(d), pi_n0_(waitmin::pi_n0(params, d)) {}

    const ModelParams& params() const noexcept { return params_; }
    long long d() const noexcept { return d_; }
    double pi_n0() const noexcept { return pi_n0_; }

    /// Pi_N(i): miner busy with i transactions waiting.
    double busy(long long i) const {
        if (i < 0) throw ValidationError("busy state index must be >= 0, got " + std::to_string(i));
        return detail::rho_pow(params_, static_cast<double>(i)) * pi_n0_;
    }

    /// Pi_M(i): miner idle with i < D transactions waiting.
    double idle(long long i) const {
        if (i < 0 || i >= d_)
            throw ValidationError("idle state index must lie in [0, " + std::to_string(d_ - 1) +
                                  "], got " + std::to_string(i));
        const double a = 1.0 + params_.mu() / params_.lambda();
        return (a - detail::rho_pow(params_, static_cast<double>(i))) * pi_n0_;
    }

    /// Pi_l = Pi_N(l) + Pi_M(l); flat below D, geometric from D on.
    double pmf(long long l) const {
        if (l < 0) throw ValidationError("queue length must be >= 0, got " + std::to_string(l));
        if (l < d_) return (1.0 + params_.mu() / params_.lambda()) * pi_n0_;
        return detail::rho_pow(params_, static_cast<double>(l)) * pi_n0_;
    }

    /// Sum of Pi_N(j) for j >= from, in closed form.
    double busy_tail(long long from) const {
        return busy(from) * (1.0 + params_.lambda() / params_.mu());
    }

    double total_busy() const { return busy_tail(0); }

    /// Sum of Pi_M(i) over i < D; the long-run fraction of time the miner idles.
    double total_idle() const {
        const double a = 1.0 + params_.mu() / params_.lambda();
        const double b = 1.0 + params_.lambda() / params_.mu();
        const double rho_d = detail::rho_pow(params_, static_cast<double>(d_));
        // sum_{i<D} rho^i = (1 - rho^D) (lambda+mu)/mu
        return pi_n0_ * (static_cast<double>(d_) * a - (1.0 - rho_d) * b);
    }

private:
    ModelParams params_;
    long long d_;
    double pi_n0_;
};

inline double pi_busy(const ModelParams& p, long long d, long long i) {
    return StationaryDistribution(p, d).busy(i);
}

inline double pi_idle(const ModelParams& p, long long d, long long i) {
    return StationaryDistribution(p, d).idle(i);
}

inline double queue_length_pmf(const ModelParams& p, long long d, long long l) {
    return StationaryDistribution(p, d).pmf(l);
}

inline double mean_queue_length(const ModelParams& p, long long d) {
    const double pn0 = pi_n0(p, d);
    const double dd = static_cast<double>(d);
    const double ratio = p.load_ratio();
    const double flat = (1.0 + p.mu() / p.lambda()) * (dd * (dd - 1.0) / 2.0);
    const double tail = ratio * (ratio + dd) * detail::rho_pow(p, dd - 1.0);
    return pn0 * (flat + tail);
}

struct AnalyticSummary {
    double l_bar;
    double w_bar;
    double w_bar_normalized;  // mu * w_bar
};

inline AnalyticSummary mean_wait(const ModelParams& p, long long d) {
    const double l_bar = mean_queue_length(p, d);
    const double w_bar = l_bar / p.lambda();
    return {l_bar, w_bar, p.mu() * w_bar};
}

/// Closed form of W for the no-wait miner (D = 1).
inline double mean_wait_d1(const ModelParams& p) {
    const double lam = p.lambda();
    const double mu = p.mu();
    return lam * (lam + mu) / (mu * (lam * mu + mu * mu + lam * lam));
}

/// Large-D approximation W ~ D / (2 lambda). Only for checking the slope of
/// the waiting-time curve; never a substitute for mean_wait.
inline double asymptotic_wait(const ModelParams& p, long long d) {
    detail::require_threshold(d);
    return static_cast<double>(d) / (2.0 * p.lambda());
}

}  // namespace waitmin
