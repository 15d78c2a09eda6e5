#pragma once

// Brute-force ground truth: the truncated continuous-time Markov chain of the
// Wait-Min(D) queue, solved numerically.
//
// State order is M_0..M_{D-1} followed by N_0..N_{n_max}. Transitions:
//   N_i --lambda--> N_{i+1}        (arrival while mining)
//   N_i --mu------> M_i   (i <  D) (round ends, too few queued)
//   N_i --mu------> N_0   (i >= D) (round ends, whole queue picked up)
//   M_i --lambda--> M_{i+1} (i < D-1)
//   M_{D-1} --lambda--> N_0        (D-th arrival triggers pickup)
// Arrivals at N_{n_max} are dropped, so the boundary row keeps only its
// mu-transition. The induced bias is bounded by the discarded tail mass.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "waitmin/model.hpp"

namespace waitmin {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr long long kOracleMaxTruncation = 20000;

/// D + max(ceil(ln(1e-12)/ln(rho)), 20), capped at kOracleMaxTruncation.
inline long long default_truncation(const ModelParams& p, long long d) {
    const double log_rho = -std::log1p(p.mu() / p.lambda());
    const double extra = std::max(std::ceil(std::log(1e-12) / log_rho), 20.0);
    const double n = static_cast<double>(d) + extra;
    return static_cast<long long>(std::min(n, static_cast<double>(kOracleMaxTruncation)));
}

class TruncatedChain {
public:
    TruncatedChain(const ModelParams& params, long long d, std::optional<long long> n_max = std::nullopt)
        : params_(params), d_(Policy{d}.d()), n_max_(n_max.value_or(default_truncation(params, d))) {
        if (n_max_ < d_ + 20)
            throw ValidationError("truncation level n_max must be >= D + 20, got " +
                                  std::to_string(n_max_));
        build();
    }

    const ModelParams& params() const noexcept { return params_; }
    long long d() const noexcept { return d_; }
    long long n_max() const noexcept { return n_max_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(d_ + n_max_ + 1); }

    std::size_t idle_index(long long i) const { return static_cast<std::size_t>(i); }
    std::size_t busy_index(long long i) const { return static_cast<std::size_t>(d_ + i); }

    const Eigen::MatrixXd& generator() const noexcept { return q_; }

private:
    void build() {
        const auto n = static_cast<Eigen::Index>(size());
        const double lam = params_.lambda();
        const double mu = params_.mu();
        q_ = Eigen::MatrixXd::Zero(n, n);
        auto add = [&](std::size_t from, std::size_t to, double rate) {
            q_(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) += rate;
        };
        for (long long i = 0; i < d_; ++i)
            add(idle_index(i), i + 1 < d_ ? idle_index(i + 1) : busy_index(0), lam);
        for (long long i = 0; i <= n_max_; ++i) {
            if (i < n_max_) add(busy_index(i), busy_index(i + 1), lam);
            add(busy_index(i), i < d_ ? idle_index(i) : busy_index(0), mu);
        }
        for (Eigen::Index r = 0; r < n; ++r) q_(r, r) = -(q_.row(r).sum() - q_(r, r));
    }

    ModelParams params_;
    long long d_;
    long long n_max_;
    Eigen::MatrixXd q_;
};

/// Stationary probabilities of a TruncatedChain, indexed like the chain.
class ChainSolution {
public:
    ChainSolution(const TruncatedChain& chain, std::vector<double> pi)
        : d_(chain.d()), n_max_(chain.n_max()), lambda_(chain.params().lambda()), pi_(std::move(pi)) {}

    const std::vector<double>& probabilities() const noexcept { return pi_; }
    double idle(long long i) const { return pi_.at(static_cast<std::size_t>(i)); }
    double busy(long long i) const { return pi_.at(static_cast<std::size_t>(d_ + i)); }
    long long d() const noexcept { return d_; }
    long long n_max() const noexcept { return n_max_; }

    /// Pi_l aggregated over busy and idle states.
    double pmf(long long l) const {
        double v = l <= n_max_ ? busy(l) : 0.0;
        if (l < d_) v += idle(l);
        return v;
    }

    double mean_queue_length() const {
        double s = 0.0;
        for (long long l = 0; l <= n_max_; ++l) s += static_cast<double>(l) * pmf(l);
        return s;
    }

    double mean_wait() const { return mean_queue_length() / lambda_; }

private:
    long long d_;
    long long n_max_;
    double lambda_;
    std::vector<double> pi_;
};

/// Solves pi Q = 0, sum(pi) = 1 by full-pivot LU on Q^T with the last balance
/// equation replaced by the normalization row.
inline ChainSolution solve_stationary(const TruncatedChain& chain) {
    const auto n = static_cast<Eigen::Index>(chain.size());
    Eigen::MatrixXd a = chain.generator().transpose();
    a.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
        throw SolverError("balance system is singular (D=" + std::to_string(chain.d()) +
                          ", n_max=" + std::to_string(chain.n_max()) + ")");
    Eigen::VectorXd x = lu.solve(b);

    std::vector<double> pi(static_cast<std::size_t>(n));
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(x(i))) throw SolverError("non-finite stationary probability");
        // Round-off can leave entries at -1e-17 in the far tail.
        const double v = std::max(x(i), 0.0);
        pi[static_cast<std::size_t>(i)] = v;
        total += v;
    }
    for (double& v : pi) v /= total;
    return ChainSolution(chain, std::move(pi));
}

inline double oracle_mean_wait(const TruncatedChain& chain) {
    return solve_stationary(chain).mean_wait();
}

}  // namespace waitmin
