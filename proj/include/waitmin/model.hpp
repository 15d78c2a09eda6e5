#pragma once

// Model parameters and policy threshold for the Wait-Min(D) mining queue.
//
// Transactions arrive at the pool as a Poisson process with rate lambda and a
// single miner completes rounds at exponential rate mu. Under Wait-Min(D) a
// miner that finishes a round waits until at least D transactions are queued
// before it picks them all up and starts the next round.

#include <cmath>
#include <stdexcept>
#include <string>

namespace waitmin {

/// Raised for any rejected input: non-positive rates, D < 1, out-of-range
/// state indices, malformed configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ModelParams {
public:
    ModelParams(double lambda, double mu) : lambda_(lambda), mu_(mu) {
        if (!std::isfinite(lambda) || lambda <= 0.0)
            throw ValidationError("arrival rate lambda must be finite and > 0, got " +
                                  std::to_string(lambda));
        if (!std::isfinite(mu) || mu <= 0.0)
            throw ValidationError("service rate mu must be finite and > 0, got " +
                                  std::to_string(mu));
    }

    double lambda() const noexcept { return lambda_; }
    double mu() const noexcept { return mu_; }

    /// Geometric decay ratio lambda / (lambda + mu) of the busy-state chain.
    double rho() const noexcept { return lambda_ / (lambda_ + mu_); }
    /// mu / (lambda + mu), i.e. 1 - rho without cancellation.
    double one_minus_rho() const noexcept { return mu_ / (lambda_ + mu_); }
    /// Mean mining-round duration 1/mu.
    double mean_service() const noexcept { return 1.0 / mu_; }
    double load_ratio() const noexcept { return lambda_ / mu_; }

private:
    double lambda_;
    double mu_;
};

inline ModelParams new_params(double lambda, double mu) { return ModelParams(lambda, mu); }

/// Wait-Min threshold D. D = 1 is the traditional no-wait miner.
class Policy {
public:
    explicit Policy(long long d) : d_(d) {
        if (d < 1) throw ValidationError("threshold D must be >= 1, got " + std::to_string(d));
    }
    long long d() const noexcept { return d_; }

private:
    long long d_;
};

}  // namespace waitmin
