#pragma once

// Subcommand bodies for the `waitmin` tool. Each writes its report to `out`,
// diagnostics to `err`, and returns the process exit code.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "waitmin/analytic.hpp"
#include "waitmin/format.hpp"
#include "waitmin/model.hpp"
#include "waitmin/optimizer.hpp"
#include "waitmin/oracle.hpp"
#include "waitmin/simulator.hpp"
#include "waitmin/stats.hpp"
#include "waitmin/sweep.hpp"

namespace waitmin::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kBoundTooSmall = 3,
    kDiscrepancy = 4,
};

/// Simulated mean further than this many CI half-widths from the analytic
/// value fails the run.
inline constexpr double kTripwireHalfWidths = 5.0;

namespace detail {

inline void kv(std::ostream& out, const std::string& key, const std::string& value) {
    out << key;
    for (std::size_t i = key.size(); i < 22; ++i) out << ' ';
    out << value << '\n';
}

}  // namespace detail

inline int cmd_analytic(std::ostream& out, double lambda, double mu, long long d) {
    const ModelParams p(lambda, mu);
    const auto s = mean_wait(p, d);
    detail::kv(out, "lambda", fmt_num(p.lambda()));
    detail::kv(out, "mu", fmt_num(p.mu()));
    detail::kv(out, "D", std::to_string(d));
    detail::kv(out, "pi_n0", fmt_num(pi_n0(p, d)));
    detail::kv(out, "l_bar", fmt_num(s.l_bar));
    detail::kv(out, "w_bar", fmt_num(s.w_bar));
    detail::kv(out, "mu_w_bar", fmt_num(s.w_bar_normalized));
    return kOk;
}

inline int cmd_optimize(std::ostream& out, std::ostream& err, double lambda, double mu,
                        std::optional<long long> dmax) {
    const ModelParams p(lambda, mu);
    try {
        const auto r = find_d_star(p, dmax);
        detail::kv(out, "lambda_over_mu", fmt_num(p.load_ratio()));
        detail::kv(out, "search_bound", std::to_string(r.search_bound));
        detail::kv(out, "d_star", std::to_string(r.d_star));
        detail::kv(out, "d_heuristic", std::to_string(r.d_heuristic));
        detail::kv(out, "w_star", fmt_num(r.w_star));
        detail::kv(out, "w_1", fmt_num(r.w_baseline));
        detail::kv(out, "mu_w_star", fmt_num(p.mu() * r.w_star));
        detail::kv(out, "mu_w_1", fmt_num(p.mu() * r.w_baseline));
        detail::kv(out, "reduction_percent", fmt_num(100.0 * r.reduction));
        return kOk;
    } catch (const BoundTooSmall& e) {
        err << "error: " << e.what() << "\n"
            << "hint: pass --dmax larger than " << e.bound() << "\n";
        return kBoundTooSmall;
    }
}

inline int cmd_simulate(std::ostream& out, std::ostream& err, double lambda, double mu, long long d,
                        const SimConfig& config) {
    const ModelParams p(lambda, mu);
    const auto analytic = mean_wait(p, d);
    const auto sim = replicate(p, d, config);
    const double idle_analytic = StationaryDistribution(p, d).total_idle();

    const std::size_t df = config.replications >= 2 ? static_cast<std::size_t>(config.replications - 1)
                                                    : static_cast<std::size_t>(config.batch_count - 1);
    const double std_err = sim.ci_half_width / stats::t_critical_975(df);
    const double diff = sim.mean_wait - analytic.w_bar;
    const double z = std_err > 0.0 ? diff / std_err : 0.0;
    const double in_half_widths = sim.ci_half_width > 0.0 ? std::abs(diff) / sim.ci_half_width : 0.0;

    detail::kv(out, "lambda", fmt_num(p.lambda()));
    detail::kv(out, "mu", fmt_num(p.mu()));
    detail::kv(out, "D", std::to_string(d));
    detail::kv(out, "seed", std::to_string(config.seed));
    detail::kv(out, "replications", std::to_string(config.replications));
    detail::kv(out, "recorded", std::to_string(sim.recorded));
    detail::kv(out, "sim_w_bar", fmt_num(sim.mean_wait) + " +/- " + fmt_num(sim.ci_half_width));
    detail::kv(out, "analytic_w_bar", fmt_num(analytic.w_bar));
    detail::kv(out, "sim_mu_w_bar",
               fmt_num(sim.mean_wait_normalized) + " +/- " + fmt_num(p.mu() * sim.ci_half_width));
    detail::kv(out, "analytic_mu_w_bar", fmt_num(analytic.w_bar_normalized));
    detail::kv(out, "z_score", fmt_num(z));
    detail::kv(out, "sim_idle_fraction", fmt_num(sim.miner_idle_fraction));
    detail::kv(out, "analytic_idle_fraction", fmt_num(idle_analytic));

    if (in_half_widths > kTripwireHalfWidths) {
        err << "error: simulated mean is " << fmt_num(in_half_widths)
            << " CI half-widths from the analytic value\n";
        return kDiscrepancy;
    }
    return kOk;
}

inline int cmd_distribution(std::ostream& out, double lambda, double mu, long long d, long long lmax) {
    if (lmax < 0) throw ValidationError("lmax must be >= 0, got " + std::to_string(lmax));
    const StationaryDistribution dist(ModelParams(lambda, mu), d);
    out << "l,pi_l\n";
    for (long long l = 0; l <= lmax; ++l) out << l << ',' << fmt_num(dist.pmf(l)) << '\n';
    return kOk;
}

inline int cmd_sweep(std::ostream& out, std::ostream& err, const std::filesystem::path& config_path,
                     const std::filesystem::path& output_dir) {
    const auto specs = load_sweep_config(config_path);
    try {
        for (const auto& spec : specs)
            for (const auto& path : run_sweep(spec, output_dir)) out << path.generic_string() << '\n';
    } catch (const BoundTooSmall& e) {
        err << "error: " << e.what() << "\n";
        return kBoundTooSmall;
    }
    return kOk;
}

/// Debug aid: truncated-chain solve next to the closed form.
inline int cmd_oracle(std::ostream& out, double lambda, double mu, long long d, std::optional<long long> n_max) {
    const ModelParams p(lambda, mu);
    const TruncatedChain chain(p, d, n_max);
    const auto sol = solve_stationary(chain);
    const StationaryDistribution closed(p, d);
    double max_diff = 0.0;
    for (long long i = 0; i < d; ++i) max_diff = std::max(max_diff, std::abs(sol.idle(i) - closed.idle(i)));
    for (long long i = 0; i <= chain.n_max(); ++i)
        max_diff = std::max(max_diff, std::abs(sol.busy(i) - closed.busy(i)));
    detail::kv(out, "states", std::to_string(chain.size()));
    detail::kv(out, "n_max", std::to_string(chain.n_max()));
    detail::kv(out, "oracle_w_bar", fmt_num(sol.mean_wait()));
    detail::kv(out, "analytic_w_bar", fmt_num(mean_wait(p, d).w_bar));
    detail::kv(out, "max_state_abs_diff", fmt_num(max_diff));
    return kOk;
}

}  // namespace waitmin::cli
