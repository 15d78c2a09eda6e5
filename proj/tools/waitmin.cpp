#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "waitmin/cli.hpp"

namespace {

struct Rates {
    double lambda = 0.0;
    double mu = 0.0;
};

void add_rates(CLI::App* cmd, Rates& r) {
    cmd->add_option("--lambda", r.lambda, "transaction arrival rate")->required();
    cmd->add_option("--mu", r.mu, "mining-round completion rate")->required();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace waitmin;

    CLI::App app{"Wait-Min(D) mining queue: analysis, optimization and simulation"};
    app.require_subcommand(1);

    Rates rates;
    long long d = 1;
    std::optional<long long> dmax;
    long long lmax = 0;
    std::optional<long long> n_max;
    SimConfig sim;
    std::string config_path;
    std::string output_dir = "./out";

    auto* analytic = app.add_subcommand("analytic", "closed-form Pi_N0, L, W and mu*W for one threshold");
    add_rates(analytic, rates);
    analytic->add_option("--d", d, "threshold D")->required();

    auto* optimize = app.add_subcommand("optimize", "exact minimizing threshold D*");
    add_rates(optimize, rates);
    optimize->add_option("--dmax", dmax, "upper end of the search (default max(ceil(3 lambda/mu), 16))");

    auto* simulate = app.add_subcommand("simulate", "discrete-event simulation next to the closed form");
    add_rates(simulate, rates);
    simulate->add_option("--d", d, "threshold D")->required();
    simulate->add_option("--transactions", sim.num_transactions, "recorded transactions per replication")
        ->capture_default_str();
    simulate->add_option("--warmup", sim.warmup_transactions, "discarded warm-up transactions")
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
    simulate->add_option("--replications", sim.replications, "independent replications")->capture_default_str();
    simulate->add_option("--batches", sim.batch_count, "batch-means batches")->capture_default_str();

    auto* distribution = app.add_subcommand("distribution", "queue-length pmf as CSV (l,pi_l)");
    add_rates(distribution, rates);
    distribution->add_option("--d", d, "threshold D")->required();
    distribution->add_option("--lmax", lmax, "largest queue length to emit")->required();

    auto* sweep = app.add_subcommand("sweep", "run the sweeps in a JSON config, writing CSV files");
    sweep->add_option("config", config_path, "sweep config (JSON)")->required();
    sweep->add_option("--output-dir", output_dir, "output directory")->capture_default_str();

    auto* oracle = app.add_subcommand("oracle", "truncated-chain solve next to the closed form");
    oracle->group("");  // hidden from --help
    add_rates(oracle, rates);
    oracle->add_option("--d", d, "threshold D")->required();
    oracle->add_option("--n-max", n_max, "truncation level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kInvalidInput;
    }

    try {
        if (*analytic) return cli::cmd_analytic(std::cout, rates.lambda, rates.mu, d);
        if (*optimize) return cli::cmd_optimize(std::cout, std::cerr, rates.lambda, rates.mu, dmax);
        if (*simulate) return cli::cmd_simulate(std::cout, std::cerr, rates.lambda, rates.mu, d, sim);
        if (*distribution) return cli::cmd_distribution(std::cout, rates.lambda, rates.mu, d, lmax);
        if (*sweep) return cli::cmd_sweep(std::cout, std::cerr, config_path, output_dir);
        if (*oracle) return cli::cmd_oracle(std::cout, rates.lambda, rates.mu, d, n_max);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return cli::kInvalidInput;
}
