#pragma once

// Declarative parameter sweeps that regenerate the waiting-time and
// queue-length datasets as CSV.
//
// Config format (JSON, unknown keys rejected at every level):
//
//   {"sweeps": [{
//       "name": "sweep1",                     // [A-Za-z0-9_.-]+
//       "lambda_over_mu": [100],              // mu is fixed to 1
//       "d_values": [1, 2, 3] | {"from": 1, "to": 300, "step": 1} | "optimal",
//       "outputs": ["wait_curve", "optimum", "normalized_by_ratio", "pmf"],
//       "simulate": false,                    // optional
//       "sim_config": {"seed": 1, "transactions": 1000000,
//                      "warmup": 10000, "replications": 1, "batches": 30},
//       "lmax": 200                           // optional, pmf only
//   }]}
//
// File naming: a sweep writes <name>.csv when it produces a single file.
// Otherwise the stem gains _<output> when the sweep lists several outputs,
// _lm<ratio> for per-ratio outputs when several ratios are swept, and _d<D>
// for pmf when several thresholds are swept.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "waitmin/analytic.hpp"
#include "waitmin/format.hpp"
#include "waitmin/model.hpp"
#include "waitmin/optimizer.hpp"
#include "waitmin/simulator.hpp"

namespace waitmin {

enum class SweepOutput { Pmf, WaitCurve, Optimum, NormalizedByRatio };

inline const char* to_string(SweepOutput o) {
    switch (o) {
        case SweepOutput::Pmf: return "pmf";
        case SweepOutput::WaitCurve: return "wait_curve";
        case SweepOutput::Optimum: return "optimum";
        case SweepOutput::NormalizedByRatio: return "normalized_by_ratio";
    }
    return "?";
}

struct DRange {
    long long from;
    long long to;
    long long step;
};

struct OptimalD {};

using DValues = std::variant<std::vector<long long>, DRange, OptimalD>;

struct SweepSpec {
    std::string name;
    std::vector<double> lambda_over_mu;
    DValues d_values = std::vector<long long>{1};
    std::vector<SweepOutput> outputs;
    bool simulate = false;
    SimConfig sim_config{};
    std::optional<long long> lmax;

    /// Thresholds to evaluate at a given ratio ("optimal" resolves per ratio).
    std::vector<long long> thresholds(double ratio) const {
        if (const auto* list = std::get_if<std::vector<long long>>(&d_values)) return *list;
        if (const auto* r = std::get_if<DRange>(&d_values)) {
            std::vector<long long> out;
            for (long long d = r->from; d <= r->to; d += r->step) out.push_back(d);
            return out;
        }
        return {find_d_star(ModelParams(ratio, 1.0)).d_star};
    }
};

namespace detail {

inline bool is_safe_name(const std::string& s) {
    if (s.empty() || s.front() == '.') return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-' || c == '.';
    });
}

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ValidationError(where + ": unknown field '" + key + "'");
}

inline long long get_count(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
    return j.get<long long>();
}

inline SimConfig parse_sim_config(const nlohmann::json& j, const std::string& where) {
    reject_unknown(j, {"seed", "transactions", "warmup", "replications", "batches"}, where);
    SimConfig c;
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ValidationError(where + ".seed: expected a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("transactions")) c.num_transactions = get_count(j["transactions"], where + ".transactions");
    if (j.contains("warmup")) c.warmup_transactions = get_count(j["warmup"], where + ".warmup");
    if (j.contains("replications")) c.replications = get_count(j["replications"], where + ".replications");
    if (j.contains("batches")) c.batch_count = get_count(j["batches"], where + ".batches");
    try {
        c.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(where + ": " + e.what());
    }
    return c;
}

inline DValues parse_d_values(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) {
        if (j.get<std::string>() != "optimal") throw ValidationError(where + ": the only string allowed is \"optimal\"");
        return OptimalD{};
    }
    if (j.is_array()) {
        if (j.empty()) throw ValidationError(where + ": list must not be empty");
        std::vector<long long> ds;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const auto d = get_count(j[i], where + "[" + std::to_string(i) + "]");
            if (d < 1) throw ValidationError(where + "[" + std::to_string(i) + "]: D must be >= 1");
            ds.push_back(d);
        }
        return ds;
    }
    if (j.is_object()) {
        reject_unknown(j, {"from", "to", "step"}, where);
        for (const char* k : {"from", "to"})
            if (!j.contains(k)) throw ValidationError(where + ": missing field '" + k + "'");
        DRange r{get_count(j["from"], where + ".from"), get_count(j["to"], where + ".to"), 1};
        if (j.contains("step")) r.step = get_count(j["step"], where + ".step");
        if (r.from < 1) throw ValidationError(where + ".from: D must be >= 1");
        if (r.to < r.from) throw ValidationError(where + ".to: must be >= from");
        if (r.step < 1) throw ValidationError(where + ".step: must be >= 1");
        return r;
    }
    throw ValidationError(where + ": expected a list, a {from,to,step} range or \"optimal\"");
}

inline SweepOutput parse_output(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        for (auto o : {SweepOutput::Pmf, SweepOutput::WaitCurve, SweepOutput::Optimum, SweepOutput::NormalizedByRatio})
            if (s == to_string(o)) return o;
    }
    throw ValidationError(where + ": expected one of pmf, wait_curve, optimum, normalized_by_ratio");
}

}  // namespace detail

inline SweepSpec parse_sweep_spec(const nlohmann::json& j, const std::string& where) {
    using namespace detail;
    reject_unknown(j, {"name", "lambda_over_mu", "d_values", "outputs", "simulate", "sim_config", "lmax"}, where);
    SweepSpec s;
    if (!j.contains("name") || !j["name"].is_string()) throw ValidationError(where + ".name: required string");
    s.name = j["name"].get<std::string>();
    if (!is_safe_name(s.name)) throw ValidationError(where + ".name: '" + s.name + "' is not filesystem-safe");

    if (!j.contains("lambda_over_mu") || !j["lambda_over_mu"].is_array() || j["lambda_over_mu"].empty())
        throw ValidationError(where + ".lambda_over_mu: required non-empty list");
    for (std::size_t i = 0; i < j["lambda_over_mu"].size(); ++i) {
        const auto& v = j["lambda_over_mu"][i];
        const auto at = where + ".lambda_over_mu[" + std::to_string(i) + "]";
        if (!v.is_number()) throw ValidationError(at + ": expected a number");
        const double r = v.get<double>();
        if (!std::isfinite(r) || r <= 0.0) throw ValidationError(at + ": must be > 0");
        s.lambda_over_mu.push_back(r);
    }

    if (!j.contains("d_values")) throw ValidationError(where + ".d_values: required");
    s.d_values = parse_d_values(j["d_values"], where + ".d_values");

    if (!j.contains("outputs") || !j["outputs"].is_array() || j["outputs"].empty())
        throw ValidationError(where + ".outputs: required non-empty list");
    for (std::size_t i = 0; i < j["outputs"].size(); ++i) {
        const auto o = parse_output(j["outputs"][i], where + ".outputs[" + std::to_string(i) + "]");
        if (std::find(s.outputs.begin(), s.outputs.end(), o) != s.outputs.end())
            throw ValidationError(where + ".outputs: duplicate '" + to_string(o) + "'");
        s.outputs.push_back(o);
    }

    if (j.contains("simulate")) {
        if (!j["simulate"].is_boolean()) throw ValidationError(where + ".simulate: expected true/false");
        s.simulate = j["simulate"].get<bool>();
    }
    if (j.contains("sim_config")) s.sim_config = parse_sim_config(j["sim_config"], where + ".sim_config");
    if (j.contains("lmax")) {
        const auto l = get_count(j["lmax"], where + ".lmax");
        if (l < 0) throw ValidationError(where + ".lmax: must be >= 0");
        s.lmax = l;
    }
    return s;
}

inline std::vector<SweepSpec> parse_sweep_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("config: invalid JSON: ") + e.what());
    }
    detail::reject_unknown(j, {"sweeps"}, "config");
    if (!j.contains("sweeps") || !j["sweeps"].is_array() || j["sweeps"].empty())
        throw ValidationError("config.sweeps: required non-empty list");
    std::vector<SweepSpec> specs;
    std::set<std::string> names;
    for (std::size_t i = 0; i < j["sweeps"].size(); ++i) {
        auto s = parse_sweep_spec(j["sweeps"][i], "sweeps[" + std::to_string(i) + "]");
        if (!names.insert(s.name).second)
            throw ValidationError("sweeps[" + std::to_string(i) + "].name: duplicate '" + s.name + "'");
        specs.push_back(std::move(s));
    }
    return specs;
}

inline std::vector<SweepSpec> load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config: cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

/// Default pmf range: twice the larger of D and lambda/mu, plus a margin.
inline long long default_lmax(double ratio, long long d) {
    return 2 * std::max(d, static_cast<long long>(std::ceil(ratio))) + 10;
}

/// Writes every CSV of one sweep into `dir` and returns the paths in the
/// order they were written.
inline std::vector<std::filesystem::path> run_sweep(const SweepSpec& spec, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;

    const bool many_outputs = spec.outputs.size() > 1;
    const bool many_ratios = spec.lambda_over_mu.size() > 1;

    auto stem = [&](SweepOutput o, std::optional<double> ratio, std::optional<long long> d, bool many_d) {
        std::string s = spec.name;
        if (many_outputs) s += std::string("_") + to_string(o);
        if (ratio && many_ratios) s += "_lm" + fmt_num(*ratio);
        if (d && many_d) s += "_d" + std::to_string(*d);
        return dir / (s + ".csv");
    };

    auto write = [&](const std::filesystem::path& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        out << body;
        written.push_back(path);
    };

    long long sim_point = 0;
    for (SweepOutput o : spec.outputs) {
        if (o == SweepOutput::Optimum) {
            std::string body = "lambda_over_mu,d_star,d_heuristic,w_star_normalized,w1_normalized,reduction\n";
            for (double ratio : spec.lambda_over_mu) {
                const auto r = find_d_star(ModelParams(ratio, 1.0));
                body += fmt_num(ratio) + "," + std::to_string(r.d_star) + "," + std::to_string(r.d_heuristic) + "," +
                        fmt_num(r.w_star) + "," + fmt_num(r.w_baseline) + "," + fmt_num(r.reduction) + "\n";
            }
            write(stem(o, std::nullopt, std::nullopt, false), body);
            continue;
        }
        for (double ratio : spec.lambda_over_mu) {
            const ModelParams params(ratio, 1.0);
            const auto ds = spec.thresholds(ratio);
            switch (o) {
                case SweepOutput::WaitCurve: {
                    std::string body = spec.simulate ? "d,w_bar,mu_w_bar,sim_mean,sim_ci\n" : "d,w_bar,mu_w_bar\n";
                    for (long long d : ds) {
                        const auto a = mean_wait(params, d);
                        body += std::to_string(d) + "," + fmt_num(a.w_bar) + "," + fmt_num(a.w_bar_normalized);
                        if (spec.simulate) {
                            SimConfig c = spec.sim_config;
                            c.seed = derive_seed(spec.sim_config.seed, static_cast<std::uint64_t>(sim_point++));
                            const auto sim = replicate(params, d, c);
                            body += "," + fmt_num(sim.mean_wait) + "," + fmt_num(sim.ci_half_width);
                        }
                        body += "\n";
                    }
                    write(stem(o, ratio, std::nullopt, false), body);
                    break;
                }
                case SweepOutput::NormalizedByRatio: {
                    std::string body = "d_mu_over_lambda,mu_w_bar\n";
                    for (long long d : ds)
                        body += fmt_num(static_cast<double>(d) / ratio) + "," +
                                fmt_num(mean_wait(params, d).w_bar_normalized) + "\n";
                    write(stem(o, ratio, std::nullopt, false), body);
                    break;
                }
                case SweepOutput::Pmf: {
                    for (long long d : ds) {
                        const StationaryDistribution dist(params, d);
                        const long long lmax = spec.lmax.value_or(default_lmax(ratio, d));
                        std::string body = "l,pi_l\n";
                        for (long long l = 0; l <= lmax; ++l)
                            body += std::to_string(l) + "," + fmt_num(dist.pmf(l)) + "\n";
                        write(stem(o, ratio, d, ds.size() > 1), body);
                    }
                    break;
                }
                case SweepOutput::Optimum: break;
            }
        }
    }
    return written;
}

}  // namespace waitmin
