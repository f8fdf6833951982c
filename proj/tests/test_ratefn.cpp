#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "polymerlab/errors.hpp"
#include "polymerlab/ratefn.hpp"

using namespace polymerlab;

namespace {

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (int i = 0; lo + i * step <= hi + 1e-12; ++i) g.push_back(lo + i * step);
    return g;
}

}  // namespace

TEST(FiniteRate, Examples) {
    const auto d = make_distribution(Family::simple);
    const double r0 = finite_rate(d, 10, ModelSpec::domb_joyce(0.0), 0.0, Side::ge);
    EXPECT_GE(r0, 0.0);
    EXPECT_LE(r0, std::log(2.0) / 10.0);
    EXPECT_NEAR(finite_rate(d, 2, ModelSpec::domb_joyce(0.2), 1.0, Side::ge), -0.5 * std::log(0.25), 1e-14);
    EXPECT_TRUE(std::isinf(finite_rate(d, 4, ModelSpec::domb_joyce(0.2), 1.5, Side::ge)));
}

TEST(FiniteRate, LeSideMatchesOracle) {
    const auto d = make_distribution(Family::uniform_range, 2);
    const auto m = oracle::weighted(d, 5, [](const oracle::Path& p) { return std::exp(-0.3 * static_cast<double>(oracle::H(p))); });
    double s = 0.0;
    for (const auto& [x, w] : m.measure)
        if (x >= 0 && x <= 2) s += w;
    EXPECT_NEAR(finite_rate(d, 5, ModelSpec::domb_joyce(0.3), 0.4, Side::le), -std::log(s) / 5.0, 1e-13);
}

TEST(FiniteLambda, Examples) {
    const auto d = make_distribution(Family::simple);
    EXPECT_NEAR(finite_lambda(d, 2, 0.0, 0.0, SignRestriction::nonnegative), 0.5 * std::log(0.75), 1e-15);
    EXPECT_NEAR(finite_lambda(d, 6, 0.0, 0.0, SignRestriction::none), 0.0, 1e-14);
    const double slope = (finite_lambda(d, 8, 0.3, 20.01, SignRestriction::nonnegative) -
                          finite_lambda(d, 8, 0.3, 19.99, SignRestriction::nonnegative)) / 0.02;
    EXPECT_NEAR(slope, 1.0, 1e-6);
}

TEST(FiniteLambda, GridConvexAndConsistent) {
    const auto d = make_distribution(Family::uniform_range, 2);
    const auto mu = grid(-2.0, 2.0, 0.1);
    const auto g = finite_lambda_grid(d, 6, 0.3, mu, SignRestriction::nonnegative);
    ASSERT_EQ(g.lambda.size(), mu.size());
    for (std::size_t i = 1; i + 1 < mu.size(); ++i) EXPECT_GE(g.lambda[i + 1] - 2 * g.lambda[i] + g.lambda[i - 1], -1e-9);
    for (std::size_t i : {0u, 17u, 40u})
        EXPECT_NEAR(g.lambda[i], finite_lambda(d, 6, 0.3, mu[i], SignRestriction::nonnegative), 1e-12);
}

TEST(Legendre, Quadratic) {
    LambdaGrid g;
    g.mu = grid(-3.0, 3.0, 0.01);
    for (double m : g.mu) g.lambda.push_back(0.5 * m * m);
    const std::vector<double> b{0.0, 1.0, 2.5};
    const auto c = legendre(g, b);
    EXPECT_NEAR(c.points[0].value, 0.0, 1e-12);
    EXPECT_NEAR(c.points[1].value, 0.5, 1e-6);
    EXPECT_NEAR(c.points[1].argmax_mu, 1.0, 1e-9);
    EXPECT_NEAR(c.points[2].value, 3.125, 1e-6);
    for (const auto& p : c.points) EXPECT_FALSE(p.at_grid_edge);
    const std::vector<double> far{5.0};
    const auto e = legendre(g, far);
    EXPECT_TRUE(e.points[0].at_grid_edge);
    EXPECT_FALSE(e.warnings.empty());
}

TEST(Legendre, RejectsShortGrid) {
    LambdaGrid g{{0.0, 1.0}, {0.0, 0.5}};
    const std::vector<double> b{0.0};
    EXPECT_THROW(legendre(g, b), ConfigError);
}

TEST(Legendre, FiniteDualityOnSimpleWalk) {
    const auto d = make_distribution(Family::simple);
    const auto g = finite_lambda_grid(d, 10, 0.3, grid(-1.0, 6.0, 0.01), SignRestriction::nonnegative);
    const auto thetas = grid(0.4, 0.9, 0.1);
    const auto c = legendre(g, thetas);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double rate = finite_rate(d, 10, ModelSpec::domb_joyce(0.3), thetas[i], Side::ge);
        EXPECT_NEAR(c.points[i].value, rate, 0.02) << "theta " << thetas[i];
    }
}

TEST(ScaledRateCurve, SidesAndInfinity) {
    const auto d = make_distribution(Family::simple);
    const std::vector<double> b{0.5, 1.2, 50.0};
    const auto c = scaled_rate_curve(d, 8, 0.3, b);
    ASSERT_EQ(c.points.size(), 3u);
    EXPECT_EQ(c.points[0].side, Side::le);
    EXPECT_EQ(c.points[1].side, Side::ge);
    EXPECT_TRUE(c.points[2].infinite);
    const double theta = 1.2 * std::cbrt(0.3);
    EXPECT_FALSE(c.points[1].infinite);
    EXPECT_NEAR(c.points[1].value, finite_rate(d, 8, ModelSpec::domb_joyce(0.3), theta, Side::ge) / std::pow(0.3, 2.0 / 3.0), 1e-12);
}

TEST(EdwardsReference, Values) {
    const auto a = edwards_reference(1.0, 1.0);
    EXPECT_DOUBLE_EQ(a.theta, 1.11);
    EXPECT_DOUBLE_EQ(a.r, 2.19);
    const auto b = edwards_reference(1.0, 0.001);
    EXPECT_NEAR(b.theta, 0.111, 1e-12);
    EXPECT_NEAR(b.r, 0.0219, 1e-12);
    const auto c = edwards_reference(std::sqrt(2.5), kInfiniteBeta);
    EXPECT_NEAR(c.theta, 1.11 * std::cbrt(2.5), 1e-12);
}

TEST(Bn, SmallValues) {
    const auto d = make_distribution(Family::simple);
    const auto b1 = compute_bn(d, 1);
    EXPECT_NEAR(b1.B, -2.0, 1e-15);
    EXPECT_NEAR(b1.expected_G, 2.0, 1e-15);
    const auto b2 = compute_bn(d, 2);
    EXPECT_NEAR(b2.B, -2.0, 1e-15);
    EXPECT_NEAR(b2.expected_G, 4.0, 1e-15);
}

TEST(Bn, MatchesPathOracle) {
    for (auto fam : {Family::simple, Family::uniform_range}) {
        const auto d = make_distribution(fam, 2);
        const int nmax = fam == Family::simple ? 10 : 6;
        const auto series = bn_series(d, nmax);
        for (int n = 1; n <= nmax; ++n) {
            double eg = 0.0;
            oracle::for_each_path(d, n, [&](const oracle::Path& p, double w) { eg += w * static_cast<double>(oracle::G(p)); });
            const auto r = compute_bn(d, n);
            EXPECT_NEAR(r.expected_G, eg, 1e-10);
            EXPECT_NEAR(series[static_cast<std::size_t>(n - 1)], r.B, 1e-10);
        }
    }
}

TEST(Bn, SymmetricSummands) {
    const auto d = make_distribution(Family::uniform_range, 3);
    const auto r = compute_bn(d, 5);
    for (int k = 1; k <= 5; ++k) {
        const auto law = step_law_convolution(d, k);
        EXPECT_NEAR(law.at(1), law.at(-1), 1e-15);
        EXPECT_NEAR(r.summands[static_cast<std::size_t>(k - 1)], 2 * law.at(0) - 2 * law.at(1), 1e-14);
    }
}
