#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "polymerlab/errors.hpp"
#include "polymerlab/stepdist.hpp"

using namespace polymerlab;

TEST(StepDistribution, SimpleWalk) {
    const auto d = make_distribution(Family::simple);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_DOUBLE_EQ(d.pmf(-1), 0.5);
    EXPECT_DOUBLE_EQ(d.pmf(1), 0.5);
    EXPECT_DOUBLE_EQ(d.pmf(0), 0.0);
    EXPECT_DOUBLE_EQ(d.variance(), 1.0);
    EXPECT_DOUBLE_EQ(d.mean(), 0.0);
}

TEST(StepDistribution, UniformRangeVariance) {
    for (int L = 1; L <= 8; ++L) {
        const auto d = make_distribution(Family::uniform_range, L);
        double m2 = 0.0;
        for (int x = -L; x <= L; ++x)
            if (x != 0) m2 += x * x / (2.0 * L);
        EXPECT_NEAR(d.variance(), m2, 1e-12);
        EXPECT_NEAR(d.variance(), (L + 1) * (2 * L + 1) / 6.0, 1e-12);
        EXPECT_EQ(d.size(), static_cast<std::size_t>(2 * L));
    }
}

TEST(StepDistribution, GeometricTail) {
    const auto d = make_distribution(Family::geometric_tail, 2);
    // (1/4) (1/2)^{|x|-1} on each side
    EXPECT_NEAR(d.pmf(1), 0.25, 1e-14);
    EXPECT_NEAR(d.pmf(-3), 0.25 / 4, 1e-14);
    EXPECT_NEAR(d.variance(), 6.0, 1e-9);
    double total = 0.0;
    for (double p : d.probs()) total += p;
    EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(StepDistribution, CustomAndErrors) {
    const auto d = make_custom({{-2, 1.0}, {1, 2.0}});
    EXPECT_NEAR(d.pmf(1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(d.variance(), 2.0, 1e-14);
    EXPECT_THROW(make_custom({{1, 1.0}, {2, 1.0}}), ConfigError);
    EXPECT_THROW(make_distribution(Family::geometric_tail, 1), ConfigError);
    EXPECT_THROW(make_custom({}), ConfigError);
    EXPECT_THROW(make_custom({{1, -0.5}, {2, 1.0}}), ConfigError);
    EXPECT_THROW(make_distribution(Family::uniform_range, 0), ConfigError);
    EXPECT_THROW(family_from_string("triangular"), ConfigError);
    EXPECT_EQ(family_from_string(to_string(Family::geometric_tail)), Family::geometric_tail);
}

TEST(CharFn, SimpleValues) {
    const auto d = make_distribution(Family::simple);
    EXPECT_NEAR(std::abs(char_fn(d, 0.0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(char_fn(d, std::numbers::pi) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(char_fn(d, std::numbers::pi / 2)), 0.0, 1e-15);
}

TEST(CharFn, RealForSymmetric) {
    const auto d = make_distribution(Family::uniform_range, 3);
    for (double t : {0.1, 0.7, 2.3}) EXPECT_NEAR(char_fn(d, t).imag(), 0.0, 1e-15);
}

TEST(Convolution, SmallCases) {
    const auto d = make_distribution(Family::simple);
    const auto s0 = step_law_convolution(d, 0);
    EXPECT_EQ(s0.min_value, 0);
    EXPECT_DOUBLE_EQ(s0.at(0), 1.0);
    const auto s2 = step_law_convolution(d, 2);
    EXPECT_DOUBLE_EQ(s2.at(-2), 0.25);
    EXPECT_DOUBLE_EQ(s2.at(0), 0.5);
    EXPECT_DOUBLE_EQ(s2.at(2), 0.25);
    EXPECT_DOUBLE_EQ(s2.at(1), 0.0);

    const auto u = make_distribution(Family::uniform_range, 2);
    const auto u1 = step_law_convolution(u, 1);
    for (int x = -2; x <= 2; ++x) EXPECT_DOUBLE_EQ(u1.at(x), u.pmf(x));
}

TEST(Convolution, MatchesPathEnumeration) {
    for (auto fam : {Family::simple, Family::uniform_range, Family::geometric_tail}) {
        const auto d = make_distribution(fam, 2);
        const int n = fam == Family::geometric_tail ? 3 : 6;
        std::map<long, double> brute;
        oracle::for_each_path(d, n, [&](const oracle::Path& p, double w) { brute[p.back()] += w; });
        const auto law = step_law_convolution(d, n);
        EXPECT_NEAR(law.total(), 1.0, 1e-12);
        for (const auto& [x, w] : brute) EXPECT_NEAR(law.at(x), w, 1e-14) << to_string(fam) << " x=" << x;
    }
}

TEST(Convolution, SupportCap) {
    const auto d = make_distribution(Family::uniform_range, 4);
    EXPECT_THROW(step_law_convolution(d, 100, 50), BudgetError);
}

TEST(Conditions, Reports) {
    const auto r1 = check_condition(make_distribution(Family::uniform_range, 1), 1.0, 10.0, 0.1);
    EXPECT_EQ(r1.truncated_second_moment, 0.0);

    const auto d4 = make_distribution(Family::uniform_range, 4);
    const auto r4 = check_condition(d4, 1.0, 10.0, 0.1);
    EXPECT_NEAR(r4.sigma * r4.sigma, 7.5, 1e-12);
    EXPECT_NEAR(r4.max_pmf_scaled, std::pow(7.5, 1.0 / 3.0) / 8.0, 1e-12);

    const auto g = check_condition(make_distribution(Family::geometric_tail, 2), 1.0, 10.0, 0.1);
    EXPECT_TRUE(std::isfinite(g.exp_moment));
    EXPECT_GT(g.exp_moment, 1.0);

    const auto all = check_conditions(Family::uniform_range, {2, 4, 8}, 1.0, 10.0, 0.1);
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[2].L, 8);
}
