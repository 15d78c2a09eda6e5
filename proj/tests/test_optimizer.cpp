#include <cmath>

#include <gtest/gtest.h>

#include "waitmin/analytic.hpp"
#include "waitmin/optimizer.hpp"

using namespace waitmin;

namespace {

// Exact minimizers from an independent exhaustive evaluation of the closed form.
constexpr long long kDStar50 = 45;
constexpr long long kDStar100 = 90;
constexpr long long kDStar200 = 181;
constexpr long long kDStar500 = 451;
constexpr long long kDStar1000 = 901;

long long brute_argmin(const ModelParams& p, long long upto) {
    long long best = 1;
    for (long long d = 2; d <= upto; ++d)
        if (mean_wait(p, d).w_bar < mean_wait(p, best).w_bar) best = d;
    return best;
}

}  // namespace

TEST(FindDStar, ReportedOptima) {
    EXPECT_EQ(find_d_star(ModelParams(1000, 1)).d_star, kDStar1000);
    EXPECT_EQ(find_d_star(ModelParams(100, 1)).d_star, kDStar100);
    EXPECT_EQ(find_d_star(ModelParams(1, 1)).d_star, 1);
    EXPECT_EQ(find_d_star(ModelParams(50, 1)).d_star, kDStar50);
    EXPECT_EQ(find_d_star(ModelParams(200, 1)).d_star, kDStar200);
    EXPECT_EQ(find_d_star(ModelParams(500, 1)).d_star, kDStar500);
}

TEST(FindDStar, ResultFields) {
    const ModelParams p(100, 1);
    const auto r = find_d_star(p);
    EXPECT_EQ(r.search_bound, 300);
    EXPECT_EQ(r.d_heuristic, 90);
    EXPECT_DOUBLE_EQ(r.w_star, mean_wait(p, r.d_star).w_bar);
    EXPECT_DOUBLE_EQ(r.w_baseline, mean_wait_d1(p));
    EXPECT_NEAR(r.reduction, 0.10075843931848318, 1e-12);
    for (long long d = 1; d <= r.search_bound; ++d) {
        if (d < r.d_star) EXPECT_GT(mean_wait(p, d).w_bar, r.w_star);  // smallest minimizer
        else EXPECT_GE(mean_wait(p, d).w_bar, r.w_star);
    }
}

TEST(FindDStar, NoWaitOptimalHasZeroReduction) {
    for (double ratio : {0.01, 0.1, 0.5, 1.0}) {
        const auto r = find_d_star(ModelParams(ratio, 1));
        EXPECT_EQ(r.d_star, 1);
        EXPECT_EQ(r.reduction, 0.0);
        EXPECT_LE(r.w_star, r.w_baseline);
        EXPECT_EQ(r.search_bound, 16);
    }
}

TEST(FindDStar, ExhaustiveAgreement) {
    for (double ratio = 0.25; ratio <= 20.0; ratio += 0.25) {
        const ModelParams p(ratio, 1);
        const auto r = find_d_star(p);
        EXPECT_EQ(r.d_star, brute_argmin(p, static_cast<long long>(10 * ratio) + 20)) << "ratio " << ratio;
        EXPECT_GE(r.reduction, 0.0);
        EXPECT_EQ(r.reduction == 0.0, r.d_star == 1);
    }
}

TEST(FindDStar, ScaleInvariant) {
    for (double ratio : {0.7, 3.0, 12.0, 150.0}) {
        const long long base = find_d_star(ModelParams(ratio * 1.5, 1.5)).d_star;
        for (double c : {0.5, 2.0, 10.0}) EXPECT_EQ(find_d_star(ModelParams(c * ratio * 1.5, c * 1.5)).d_star, base);
    }
}

TEST(FindDStar, BoundTooSmall) {
    EXPECT_THROW(find_d_star(ModelParams(1000, 1), 500), BoundTooSmall);
    EXPECT_THROW(find_d_star(ModelParams(1000, 1), 901), BoundTooSmall);
    EXPECT_EQ(find_d_star(ModelParams(1000, 1), 902).d_star, kDStar1000);
    EXPECT_THROW(find_d_star(ModelParams(1, 1), 1), BoundTooSmall);
    EXPECT_THROW(find_d_star(ModelParams(1, 1), 0), ValidationError);
}

TEST(HeuristicDStar, Values) {
    EXPECT_EQ(heuristic_d_star(ModelParams(1000, 1)), 900);
    EXPECT_EQ(heuristic_d_star(ModelParams(1, 1)), 1);
    EXPECT_EQ(heuristic_d_star(ModelParams(0.1, 1)), 1);
    EXPECT_EQ(heuristic_d_star(ModelParams(100, 1)), 90);
    EXPECT_EQ(heuristic_d_star(ModelParams(10.5, 1)), 10);
}

TEST(HeuristicDStar, CloseToExactForLargeRatios) {
    for (double ratio : {50.0, 100.0, 200.0, 500.0, 1000.0}) {
        const ModelParams p(ratio, 1);
        const auto r = find_d_star(p);
        EXPECT_LE(std::abs(static_cast<double>(r.d_star - r.d_heuristic)), 0.03 * ratio);
    }
}
