#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "waitmin/sweep.hpp"

using namespace waitmin;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = WAITMIN_CONFIG_DIR;
const fs::path kGoldenDir = WAITMIN_GOLDEN_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("waitmin_" + tag + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()))) {
        fs::remove_all(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string with_sweep(const std::string& body) { return R"({"sweeps": [)" + body + "]}"; }

}  // namespace

TEST(SweepConfig, ParsesAllForms) {
    const auto specs = parse_sweep_config(with_sweep(R"(
        {"name": "a", "lambda_over_mu": [1, 2.5], "d_values": [1, 3], "outputs": ["wait_curve", "pmf"], "lmax": 7},
        {"name": "b", "lambda_over_mu": [100], "d_values": {"from": 2, "to": 11, "step": 3}, "outputs": ["normalized_by_ratio"]},
        {"name": "c", "lambda_over_mu": [10], "d_values": "optimal", "outputs": ["optimum"], "simulate": true,
         "sim_config": {"seed": 9, "transactions": 5000, "batches": 10}})"));
    ASSERT_EQ(specs.size(), 3u);
    EXPECT_EQ(specs[0].thresholds(1.0), (std::vector<long long>{1, 3}));
    EXPECT_EQ(specs[0].lmax, 7);
    EXPECT_EQ(specs[1].thresholds(100.0), (std::vector<long long>{2, 5, 8, 11}));
    EXPECT_EQ(specs[2].thresholds(10.0), (std::vector<long long>{9}));
    EXPECT_TRUE(specs[2].simulate);
    EXPECT_EQ(specs[2].sim_config.seed, 9u);
    EXPECT_EQ(specs[2].sim_config.num_transactions, 5000);
    EXPECT_EQ(specs[2].sim_config.batch_count, 10);
    EXPECT_EQ(specs[2].sim_config.warmup_transactions, SimConfig{}.warmup_transactions);
}

TEST(SweepConfig, RejectsBadInput) {
    const std::string ok = R"("lambda_over_mu": [1], "d_values": [1], "outputs": ["wait_curve"])";
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"not json", "invalid JSON"},
        {R"({"sweeps": [], "extra": 1})", "unknown field 'extra'"},
        {R"({"sweeps": []})", "config.sweeps"},
        {with_sweep(R"({"name": "x", "colour": 1, )" + ok + "}"), "unknown field 'colour'"},
        {with_sweep(R"({"name": "../x", )" + ok + "}"), "filesystem-safe"},
        {with_sweep(R"({"name": "", )" + ok + "}"), "filesystem-safe"},
        {with_sweep(R"({"name": "x", "lambda_over_mu": [0], "d_values": [1], "outputs": ["pmf"]})"), "lambda_over_mu[0]"},
        {with_sweep(R"({"name": "x", "lambda_over_mu": [1], "d_values": [1, 0], "outputs": ["pmf"]})"), "d_values[1]"},
        {with_sweep(R"({"name": "x", "lambda_over_mu": [1], "d_values": "best", "outputs": ["pmf"]})"), "d_values"},
        {with_sweep(R"({"name": "x", "lambda_over_mu": [1], "d_values": {"from": 5, "to": 2}, "outputs": ["pmf"]})"), "d_values.to"},
        {with_sweep(R"({"name": "x", "lambda_over_mu": [1], "d_values": {"from": 1, "to": 2, "by": 1}, "outputs": ["pmf"]})"), "unknown field 'by'"},
        {with_sweep(R"({"name": "x", "lambda_over_mu": [1], "d_values": [1], "outputs": ["plot"]})"), "outputs[0]"},
        {with_sweep(R"({"name": "x", )" + ok + R"(, "sim_config": {"transactions": 10}})"), "sim_config"},
        {with_sweep(R"({"name": "x", )" + ok + R"(}, {"name": "x", )" + ok + "}"), "duplicate 'x'"},
    };
    for (const auto& [text, needle] : cases) {
        try {
            parse_sweep_config(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ValidationError& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    }
}

TEST(RunSweep, FileNaming) {
    TempDir dir("naming");
    const auto specs = parse_sweep_config(with_sweep(R"(
        {"name": "multi", "lambda_over_mu": [1, 10], "d_values": [1, 2], "outputs": ["wait_curve", "pmf", "optimum"], "lmax": 3},
        {"name": "single", "lambda_over_mu": [4], "d_values": [2], "outputs": ["pmf"], "lmax": 3})"));
    std::set<std::string> names;
    for (const auto& s : specs)
        for (const auto& p : run_sweep(s, dir.path())) names.insert(p.filename().string());
    const std::set<std::string> expected = {
        "multi_wait_curve_lm1.csv", "multi_wait_curve_lm10.csv", "multi_pmf_lm1_d1.csv",  "multi_pmf_lm1_d2.csv",
        "multi_pmf_lm10_d1.csv",    "multi_pmf_lm10_d2.csv",     "multi_optimum.csv",     "single.csv"};
    EXPECT_EQ(names, expected);
    EXPECT_EQ(slurp(dir.path() / "single.csv").substr(0, 7), "l,pi_l\n");
}

TEST(RunSweep, PmfMatchesAnalyticAndSumsBelowOne) {
    TempDir dir("pmf");
    const auto specs = parse_sweep_config(with_sweep(R"({"name": "p", "lambda_over_mu": [1], "d_values": [1], "outputs": ["pmf"], "lmax": 40})"));
    run_sweep(specs[0], dir.path());
    const auto text = slurp(dir.path() / "p.csv");
    EXPECT_NE(text.find("\n0,0.666666666667\n"), std::string::npos);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    double total = 0.0;
    for (const auto& row : read_csv(dir.path() / "p.csv")) total += row[1];
    EXPECT_LE(total, 1.0 + 1e-11);
}

TEST(RunSweep, SimulationColumnsDeterministic) {
    TempDir a("sim_a");
    TempDir b("sim_b");
    const auto specs = parse_sweep_config(with_sweep(R"({"name": "s", "lambda_over_mu": [5], "d_values": [1, 4], "outputs": ["wait_curve"],
        "simulate": true, "sim_config": {"seed": 3, "transactions": 20000, "warmup": 1000}})"));
    run_sweep(specs[0], a.path());
    run_sweep(specs[0], b.path());
    EXPECT_EQ(slurp(a.path() / "s.csv"), slurp(b.path() / "s.csv"));
    const auto rows = read_csv(a.path() / "s.csv");
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        ASSERT_EQ(r.size(), 5u);
        EXPECT_LE(std::abs(r[3] - r[1]), 5.0 * r[4]);
    }
}

// Each canned config must reproduce its frozen snapshot byte for byte.
TEST(Golden, CannedConfigsMatchSnapshots) {
    int configs = 0;
    for (const auto& entry : fs::directory_iterator(kConfigDir)) {
        if (entry.path().extension() != ".json") continue;
        ++configs;
        const auto stem = entry.path().stem().string();
        TempDir out("golden_" + stem);
        std::set<std::string> produced;
        for (const auto& spec : load_sweep_config(entry.path()))
            for (const auto& p : run_sweep(spec, out.path())) {
                produced.insert(p.filename().string());
                const auto golden = kGoldenDir / stem / p.filename();
                ASSERT_TRUE(fs::exists(golden)) << golden;
                EXPECT_EQ(slurp(p), slurp(golden)) << "mismatch in " << golden;
            }
        std::set<std::string> expected;
        for (const auto& g : fs::directory_iterator(kGoldenDir / stem)) expected.insert(g.path().filename().string());
        EXPECT_EQ(produced, expected) << stem;
    }
    EXPECT_GE(configs, 10);
}

TEST(Golden, CurveShapes) {
    // Waiting-time curve at lambda/mu = 1000 bottoms out near D = 900.
    {
        const auto rows = read_csv(kGoldenDir / "wait_lm1000" / "wait_lm1000.csv");
        auto best = rows.front();
        for (const auto& r : rows)
            if (r[2] < best[2]) best = r;
        EXPECT_NEAR(best[0], 900.0, 30.0);
    }
    // Flat pmf below D then a drop at D.
    {
        const auto rows = read_csv(kGoldenDir / "pmf_lm1000" / "pmf_lm1000.csv");
        EXPECT_EQ(rows[0][1], rows[899][1]);
        EXPECT_LT(rows[900][1], rows[899][1]);
    }
    // No-wait normalized wait increases with lambda towards 1.
    {
        const auto rows = read_csv(kGoldenDir / "no_wait" / "no_wait.csv");
        for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i][4], rows[i - 1][4]);
        EXPECT_NEAR(rows.back()[4], 1.0, 1e-3);
    }
    // Slope of mu*W against D*mu/lambda tends to 1/2.
    for (const char* f : {"slope_lm1.csv", "slope_lm10.csv", "slope_lm100.csv"}) {
        const auto rows = read_csv(kGoldenDir / "slope" / f);
        const auto& last = rows.back();
        EXPECT_NEAR(last[1] / last[0], 0.5, 0.01) << f;
    }
}
