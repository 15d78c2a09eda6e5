#pragma once

// Discrete-event simulation of the Wait-Min(D) mining queue.
//
// Only two events can be pending at any instant (the next arrival and, while
// the miner is busy, the end of the current round), so the event list is a
// two-slot comparison instead of a priority queue. On exact ties the arrival
// is processed first.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "waitmin/model.hpp"
#include "waitmin/rng.hpp"
#include "waitmin/stats.hpp"

namespace waitmin {

struct SimConfig {
    std::uint64_t seed = 1;
    long long num_transactions = 1'000'000;
    long long warmup_transactions = 10'000;
    long long replications = 1;
    long long batch_count = 30;

    void validate() const {
        if (num_transactions <= 0) throw ValidationError("num_transactions must be > 0");
        if (warmup_transactions <= 0) throw ValidationError("warmup_transactions must be > 0");
        if (replications < 1) throw ValidationError("replications must be >= 1");
        if (batch_count < 2) throw ValidationError("batch_count must be >= 2");
        if (num_transactions < batch_count * 100)
            throw ValidationError("num_transactions must be >= 100 * batch_count (" +
                                  std::to_string(batch_count * 100) + ")");
    }
};

struct SimResult {
    double mean_wait = 0.0;
    double ci_half_width = 0.0;
    double mean_wait_normalized = 0.0;
    long long recorded = 0;
    double mean_batch_size = 0.0;
    double miner_idle_fraction = 0.0;
    /// 95% batch-means half-width of miner_idle_fraction.
    double idle_ci_half_width = 0.0;
    /// Time-average pool length over the measurement window (for Little's law).
    double time_avg_queue_length = 0.0;
};

enum class EventKind { Arrival, MiningComplete };

struct Event {
    double time;
    EventKind kind;
};

/// Reported to observers each time the miner takes a batch from the pool.
struct Pickup {
    double time;
    std::size_t batch_size;
    std::size_t queue_before;      // pool length just before the pickup
    bool triggered_by_arrival;     // idle miner reached D queued transactions
    double first_wait;             // wait of the oldest transaction in the batch
    double last_wait;              // wait of the newest transaction in the batch
};

/// Observer hooks. All are optional; the defaults compile away.
struct NullObserver {
    void on_event(const Event&, std::size_t /*queue_len*/, bool /*miner_idle*/) {}
    void on_pickup(const Pickup&) {}
};

template <typename Observer = NullObserver>
SimResult run(const ModelParams& params, long long d, const SimConfig& config, Observer&& observer = {}) {
    Policy policy{d};
    config.validate();

    const double lam = params.lambda();
    const double mu = params.mu();
    const auto threshold = static_cast<std::size_t>(policy.d());
    constexpr double kNever = std::numeric_limits<double>::infinity();

    Xoshiro256 rng(config.seed);
    std::deque<double> pool;

    // Cold start in M_0: empty pool, idle miner.
    bool idle = true;
    double now = 0.0;
    double next_arrival = rng.exponential(lam);
    double next_completion = kNever;

    const auto n_record = static_cast<std::size_t>(config.num_transactions);
    const auto n_warmup = static_cast<std::size_t>(config.warmup_transactions);
    const auto n_batches = static_cast<std::size_t>(config.batch_count);
    std::vector<double> batch_sum(n_batches, 0.0);
    std::vector<std::size_t> batch_n(n_batches, 0);
    std::vector<double> batch_time(n_batches, 0.0);
    std::vector<double> batch_idle(n_batches, 0.0);

    std::size_t picked_total = 0;
    std::size_t recorded = 0;
    double wait_sum = 0.0;

    bool measuring = false;
    double window_start = 0.0;
    double last_change = 0.0;
    double queue_area = 0.0;
    double idle_time = 0.0;
    std::size_t window_pickups = 0;
    std::size_t window_picked = 0;

    auto advance_clock = [&](double t) {
        if (measuring) {
            const double dt = t - last_change;
            const std::size_t b = std::min(recorded * n_batches / n_record, n_batches - 1);
            queue_area += dt * static_cast<double>(pool.size());
            batch_time[b] += dt;
            if (idle) {
                idle_time += dt;
                batch_idle[b] += dt;
            }
        }
        last_change = t;
        now = t;
    };

    auto pick_up = [&](bool by_arrival) {
        Pickup info{now, pool.size(), pool.size(), by_arrival, now - pool.front(), now - pool.back()};
        if (measuring) {
            ++window_pickups;
            window_picked += pool.size();
        }
        for (double arrived : pool) {
            if (picked_total >= n_warmup && recorded < n_record) {
                const double w = now - arrived;
                const std::size_t b = recorded * n_batches / n_record;
                batch_sum[b] += w;
                ++batch_n[b];
                wait_sum += w;
                ++recorded;
            }
            ++picked_total;
        }
        pool.clear();
        if (!measuring && picked_total >= n_warmup) {
            measuring = true;
            window_start = now;
            last_change = now;
        }
        observer.on_pickup(info);
        idle = false;
        next_completion = now + rng.exponential(mu);
    };

    while (recorded < n_record) {
        if (next_arrival <= next_completion) {
            advance_clock(next_arrival);
            pool.push_back(now);
            next_arrival = now + rng.exponential(lam);
            observer.on_event(Event{now, EventKind::Arrival}, pool.size(), idle);
            if (idle && pool.size() >= threshold) pick_up(true);
        } else {
            advance_clock(next_completion);
            observer.on_event(Event{now, EventKind::MiningComplete}, pool.size(), idle);
            if (pool.size() >= threshold) {
                pick_up(false);
            } else {
                idle = true;
                next_completion = kNever;
            }
        }
    }

    std::vector<double> batch_means(n_batches);
    std::vector<double> batch_idle_fraction(n_batches);
    for (std::size_t b = 0; b < n_batches; ++b) {
        batch_means[b] = batch_sum[b] / static_cast<double>(batch_n[b]);
        batch_idle_fraction[b] = batch_time[b] > 0.0 ? batch_idle[b] / batch_time[b] : 0.0;
    }
    const auto ci = stats::mean_with_ci(batch_means);
    const auto idle_ci = stats::mean_with_ci(batch_idle_fraction);

    const double window = now - window_start;
    SimResult r;
    r.mean_wait = wait_sum / static_cast<double>(recorded);
    r.ci_half_width = ci.half_width;
    r.mean_wait_normalized = mu * r.mean_wait;
    r.recorded = static_cast<long long>(recorded);
    r.mean_batch_size = window_pickups > 0 ? static_cast<double>(window_picked) / static_cast<double>(window_pickups) : 0.0;
    r.miner_idle_fraction = window > 0.0 ? idle_time / window : 0.0;
    r.idle_ci_half_width = idle_ci.half_width;
    r.time_avg_queue_length = window > 0.0 ? queue_area / window : 0.0;
    return r;
}

/// Runs `config.replications` independent simulations. Replication r uses
/// seed derive_seed(config.seed, r). With one replication the result is that
/// run unchanged; otherwise the mean is the average of the replication means
/// and the half-width is a Student-t interval across replications.
inline SimResult replicate(const ModelParams& params, long long d, const SimConfig& config) {
    Policy{d};
    config.validate();
    const auto reps = static_cast<std::size_t>(config.replications);

    std::vector<std::future<SimResult>> jobs;
    jobs.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        SimConfig c = config;
        c.seed = derive_seed(config.seed, r);
        c.replications = 1;
        jobs.push_back(std::async(std::launch::async, [params, d, c] { return run(params, d, c); }));
    }
    std::vector<SimResult> results;
    results.reserve(reps);
    for (auto& j : jobs) results.push_back(j.get());
    if (reps == 1) return results.front();

    std::vector<double> means;
    std::vector<double> idle;
    SimResult pooled;
    for (const auto& r : results) {
        means.push_back(r.mean_wait);
        idle.push_back(r.miner_idle_fraction);
        pooled.recorded += r.recorded;
        pooled.mean_batch_size += r.mean_batch_size / static_cast<double>(reps);
        pooled.time_avg_queue_length += r.time_avg_queue_length / static_cast<double>(reps);
    }
    const auto ci = stats::mean_with_ci(means);
    pooled.mean_wait = ci.mean;
    pooled.ci_half_width = ci.half_width;
    pooled.mean_wait_normalized = params.mu() * ci.mean;
    const auto idle_ci = stats::mean_with_ci(idle);
    pooled.miner_idle_fraction = idle_ci.mean;
    pooled.idle_ci_half_width = idle_ci.half_width;
    return pooled;
}

}  // namespace waitmin
