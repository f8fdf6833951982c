#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "polymerlab/enumerate.hpp"
#include "polymerlab/errors.hpp"

using namespace polymerlab;

namespace {

double dj_weight(const oracle::Path& p, double beta) { return std::exp(-beta * static_cast<double>(oracle::H(p))); }

}  // namespace

TEST(EnumerateMeasure, TwoStepClosedForm) {
    const auto d = make_distribution(Family::simple);
    for (double b : {0.0, 0.2, 1.0, 3.0}) {
        const auto r = enumerate_measure(d, 2, ModelSpec::domb_joyce(b));
        EXPECT_NEAR(r.Z, (1.0 + std::exp(-2.0 * b)) / 2.0, 1e-15);
        EXPECT_NEAR(r.logZ, std::log(r.Z), 1e-14);
    }
}

TEST(EnumerateMeasure, FreeWalkNormalized) {
    for (int n : {1, 5, 10}) {
        const auto r = enumerate_measure(make_distribution(Family::simple), n, ModelSpec::domb_joyce(0.0));
        EXPECT_NEAR(r.Z, 1.0, 1e-13);
    }
}

TEST(EnumerateMeasure, SawProbability) {
    const auto d = make_distribution(Family::simple);
    EXPECT_NEAR(enumerate_measure(d, 3, ModelSpec::saw()).Z, 0.25, 1e-15);
    for (int n = 1; n <= 20; ++n) EXPECT_NEAR(enumerate_measure(d, n, ModelSpec::saw()).Z, std::pow(2.0, 1 - n), 1e-15);
}

TEST(EnumerateMeasure, MatchesOracleForEveryModel) {
    for (auto fam : {Family::simple, Family::uniform_range}) {
        const auto d = make_distribution(fam, 2);
        const int n = fam == Family::simple ? 9 : 5;
        struct Case {
            ModelSpec m;
            std::function<double(const oracle::Path&)> w;
        };
        const std::vector<Case> cases{
            {ModelSpec::domb_joyce(0.3), [](const oracle::Path& p) { return dj_weight(p, 0.3); }},
            {ModelSpec::saw(), [](const oracle::Path& p) { return oracle::self_avoiding(p) ? 1.0 : 0.0; }},
            {ModelSpec::attraction(0.5, 0.2),
             [](const oracle::Path& p) {
                 return std::exp(-0.3 * static_cast<double>(oracle::H(p)) - 0.1 * static_cast<double>(oracle::G(p)));
             }},
            {ModelSpec::strip(1), [](const oracle::Path& p) { return oracle::strip_by_heights(p, 1); }},
        };
        for (const auto& c : cases) {
            if (c.m.kind == ModelKind::strip && n > 6) continue;
            const auto exact = oracle::weighted(d, n, c.w);
            const auto r = enumerate_measure(d, n, c.m);
            EXPECT_NEAR(r.Z, exact.Z, 1e-13 * std::max(1.0, exact.Z)) << c.m.describe();
            double total = 0.0;
            for (const auto& [x, w] : exact.measure) {
                const double got = r.raw_measure.count(x) ? r.raw_measure.at(x) : 0.0;
                EXPECT_NEAR(got, w, 1e-14) << c.m.describe() << " x=" << x;
            }
            for (const auto& [x, p] : r.endpoint_pmf) total += p;
            EXPECT_NEAR(total, 1.0, 1e-10);
            EXPECT_NEAR(r.mean_abs_endpoint(), exact.abs_sum / exact.Z, 1e-12);
        }
    }
}

TEST(EnumerateMeasure, StripOnFullPaths) {
    const auto d = make_distribution(Family::simple);
    for (int L = 1; L <= 2; ++L) {
        const auto exact = oracle::weighted(d, 5, [L](const oracle::Path& p) { return oracle::strip_by_heights(p, L); });
        EXPECT_NEAR(enumerate_measure(d, 5, ModelSpec::strip(L)).Z, exact.Z, 1e-13);
    }
}

TEST(EnumerateMeasure, FreeEndpointMatchesConvolution) {
    const auto d = make_distribution(Family::uniform_range, 2);
    const auto r = enumerate_measure(d, 6, ModelSpec::domb_joyce(0.0));
    const auto law = step_law_convolution(d, 6);
    for (long x = law.min_value; x <= law.max_value(); ++x) {
        const double got = r.endpoint_pmf.count(x) ? r.endpoint_pmf.at(x) : 0.0;
        EXPECT_NEAR(got, law.at(x), 1e-12);
    }
}

TEST(EnumerateMeasure, Budget) {
    EXPECT_THROW(enumerate_measure(make_distribution(Family::uniform_range, 4), 12, ModelSpec::domb_joyce(0.1), 1e3),
                 BudgetError);
    EXPECT_THROW(enumerate_measure(make_distribution(Family::simple), -1, ModelSpec::saw()), ConfigError);
}

TEST(TiltedPartition, Examples) {
    const auto d = make_distribution(Family::simple);
    EXPECT_NEAR(tilted_partition(d, 2, 0.0, 0.0, SignRestriction::nonnegative), 0.75, 1e-15);
    EXPECT_NEAR(tilted_partition(d, 7, 0.0, 0.0, SignRestriction::none), 1.0, 1e-13);
    // Times 1 and 2 never coincide, so H'_2 = 0 on all four paths.
    for (double b : {0.1, 0.7}) EXPECT_NEAR(tilted_partition(d, 2, b, 0.0, SignRestriction::none), 1.0, 1e-15);
    // H'_3 = 2 on the four paths with S_1 = S_3.
    for (double b : {0.1, 0.7})
        EXPECT_NEAR(tilted_partition(d, 3, b, 0.0, SignRestriction::none), (1.0 + std::exp(-2.0 * b)) / 2.0, 1e-15);
}

TEST(TiltedPartition, MatchesOracle) {
    for (auto fam : {Family::simple, Family::uniform_range}) {
        const auto d = make_distribution(fam, 2);
        const int n = fam == Family::simple ? 8 : 5;
        for (double b : {0.1, 0.5})
            for (double mu : {-0.4, 0.0, 0.3}) {
                double none = 0.0, pos = 0.0, neg = 0.0;
                oracle::for_each_path(d, n, [&](const oracle::Path& p, double w) {
                    const double x = w * std::exp(-b * static_cast<double>(oracle::Hprime(p)) + mu * static_cast<double>(p.back()));
                    none += x;
                    if (p.back() >= 0) pos += x;
                    if (p.back() <= 0) neg += x;
                });
                EXPECT_NEAR(tilted_partition(d, n, b, mu, SignRestriction::none), none, 1e-13 * none);
                EXPECT_NEAR(tilted_partition(d, n, b, mu, SignRestriction::nonnegative), pos, 1e-13 * none);
                EXPECT_NEAR(tilted_partition(d, n, b, mu, SignRestriction::nonpositive), neg, 1e-13 * none);
            }
    }
}

TEST(ConstrainedPartition, Examples) {
    const auto d = make_distribution(Family::simple);
    EXPECT_EQ(constrained_partition(d, 4, ModelSpec::domb_joyce(0.0), EndpointConstraint::ge(1.5)), 0.0);
    EXPECT_NEAR(constrained_partition(d, 4, ModelSpec::domb_joyce(0.0), EndpointConstraint::ge(-1e300)), 1.0, 1e-14);
    EXPECT_NEAR(constrained_partition(d, 2, ModelSpec::domb_joyce(0.2), EndpointConstraint::ge(1.0)), 0.25, 1e-15);
    EXPECT_EQ(log_constrained_partition(d, 4, ModelSpec::saw(), EndpointConstraint::ge(1.5)), -INFINITY);
}

TEST(ConstrainedPartition, EventsMatchOracle) {
    const auto d = make_distribution(Family::uniform_range, 2);
    const int n = 5;
    const auto exact = oracle::weighted(d, n, [](const oracle::Path& p) { return dj_weight(p, 0.4); });
    const auto r = enumerate_measure(d, n, ModelSpec::domb_joyce(0.4));
    auto sum_if = [&](auto pred) {
        double s = 0.0;
        for (const auto& [x, w] : exact.measure)
            if (pred(x)) s += w;
        return s;
    };
    for (double th : {0.0, 0.3, 0.61, 1.2}) {
        EXPECT_NEAR(std::exp(log_constrained_partition(r, EndpointConstraint::ge(th))),
                    sum_if([&](long x) { return x >= th * n - 1e-9; }), 1e-14);
        EXPECT_NEAR(std::exp(log_constrained_partition(r, EndpointConstraint::between(th))),
                    sum_if([&](long x) { return x >= 0 && x <= th * n + 1e-9; }), 1e-14);
        EXPECT_NEAR(std::exp(log_constrained_partition(r, EndpointConstraint::near(th))),
                    sum_if([&](long x) { return x >= std::floor(th * n + 1e-9) && x <= std::ceil(th * n - 1e-9); }), 1e-14);
    }
    EXPECT_NEAR(std::exp(log_constrained_partition(r, EndpointConstraint::window(3.0, 1.0))),
                sum_if([](long x) { return x >= 2 && x <= 4; }), 1e-14);
}

TEST(SplitBound, Examples) {
    const auto d = make_distribution(Family::simple);
    const auto free = split_bound_check(d, 4, 2, 0.0, 0.0);
    EXPECT_NEAR(free.lhs, 1.0, 1e-14);
    EXPECT_NEAR(free.rhs, 1.0, 1e-14);
    EXPECT_TRUE(split_bound_check(d, 4, 2, 0.3, 0.0).holds());
    EXPECT_TRUE(split_bound_check(d, 6, 3, 0.3, 0.1).holds());
    EXPECT_THROW(split_bound_check(d, 5, 2, 0.3, 0.0), ConfigError);
}

TEST(SplitBound, SidesMatchOracle) {
    const auto d = make_distribution(Family::uniform_range, 2);
    const auto s = split_bound_check(d, 4, 2, 0.3, 0.5);
    auto Z = [&](int n) {
        double z = 0.0;
        oracle::for_each_path(d, n, [&](const oracle::Path& p, double w) {
            z += w * std::exp(-0.3 * static_cast<double>(oracle::Hprime(p)) + 0.5 * static_cast<double>(p.back()));
        });
        return z;
    };
    EXPECT_NEAR(s.lhs, Z(4), 1e-12 * Z(4));
    EXPECT_NEAR(s.rhs, Z(2) * Z(2), 1e-12 * Z(4));
}

TEST(EnumerationLeaves, Counts) {
    EXPECT_DOUBLE_EQ(enumeration_leaves(make_distribution(Family::simple), 10), 1024.0);
    EXPECT_DOUBLE_EQ(enumeration_leaves(make_distribution(Family::uniform_range, 2), 3), 64.0);
}
