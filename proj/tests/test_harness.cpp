#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "polymerlab/enumerate.hpp"
#include "polymerlab/errors.hpp"
#include "polymerlab/harness.hpp"

using namespace polymerlab;

namespace {

SweepOptions quick() {
    SweepOptions o;
    o.replicas = 4;
    o.tours = 30;
    o.seed = 7;
    o.n_coefficient = 15.0;
    o.ess_threshold = 0.0;
    return o;
}

}  // namespace

TEST(FitScaling, ExactPowerLaw) {
    const std::vector<double> x{0.4, 0.2, 0.1, 0.05, 0.025};
    std::vector<double> y, se;
    for (double v : x) {
        y.push_back(2.0 * std::cbrt(v));
        se.push_back(0.01);
    }
    const auto f = fit_scaling(x, y, se);
    EXPECT_NEAR(f.slope, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(f.amplitude, 2.0, 1e-12);
    EXPECT_EQ(f.points, 5);
}

TEST(FitScaling, ConstantAndUnweighted) {
    const std::vector<double> x{1, 2, 4, 8};
    const std::vector<double> y{3, 3, 3, 3};
    const std::vector<double> se{0, 0, 0, 0};
    const auto f = fit_scaling(x, y, se);
    EXPECT_NEAR(f.slope, 0.0, 1e-14);
    EXPECT_NEAR(f.amplitude, 3.0, 1e-12);
}

TEST(FitScaling, NoisySlopeError) {
    const std::vector<double> x{1, 2, 4, 8, 16};
    const std::vector<double> y{1.0, 0.82, 0.61, 0.52, 0.39};
    const std::vector<double> se{0.01, 0.01, 0.01, 0.01, 0.01};
    const auto f = fit_scaling(x, y, se);
    EXPECT_LT(f.slope, 0.0);
    EXPECT_GT(f.slope_se, 0.0);
}

TEST(FitScaling, Errors) {
    const std::vector<double> x{1, 2};
    const std::vector<double> y{1, 2};
    EXPECT_THROW(fit_scaling(x, y, y), ConfigError);
    const std::vector<double> same{2, 2, 2};
    EXPECT_THROW(fit_scaling(same, same, same), ConfigError);
}

TEST(NRule, Values) {
    EXPECT_EQ(n_rule(200.0, 1.0), 200);
    EXPECT_EQ(n_rule(200.0, 0.025), static_cast<int>(std::ceil(200.0 * std::pow(0.025, -2.0 / 3.0))));
}

TEST(Experiment, Names) {
    for (auto e : {Experiment::beta, Experiment::sigma, Experiment::coupled, Experiment::attraction, Experiment::strip,
                   Experiment::flory})
        EXPECT_EQ(experiment_from_string(to_string(e)), e);
    EXPECT_THROW(experiment_from_string("gamma"), ConfigError);
}

TEST(SweepBeta, RowsAnchorAndReferences) {
    const std::vector<double> betas{0.1, 0.4, 0.2};
    const auto rep = sweep_beta(make_distribution(Family::simple), betas, quick());
    ASSERT_EQ(rep.rows.size(), 3u);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) EXPECT_LT(rep.rows[i - 1].param, rep.rows[i].param);
    for (const auto& r : rep.rows) {
        EXPECT_EQ(r.n, n_rule(15.0, r.beta));
        EXPECT_NEAR(r.scaled_theta, r.est.theta.value / std::cbrt(r.beta), 1e-12);
    }
    EXPECT_NEAR(rep.theta_ref_slope, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(rep.r_ref_slope, 2.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(rep.theta_ref_amplitude, 1.11);
    EXPECT_DOUBLE_EQ(rep.r_ref_amplitude, 2.19);
    ASSERT_TRUE(rep.theta_fit.has_value());
    ASSERT_TRUE(rep.anchor.has_value());
    const auto exact = enumerate_measure(make_distribution(Family::simple), rep.anchor->n, ModelSpec::domb_joyce(0.4));
    EXPECT_NEAR(rep.anchor->exact, exact.mean_abs_endpoint() / rep.anchor->n, 1e-12);
}

TEST(SweepBeta, DeterministicAndSeeded) {
    const std::vector<double> betas{0.4, 0.2, 0.1};
    auto o = quick();
    o.anchor = false;
    const auto a = sweep_beta(make_distribution(Family::simple), betas, o);
    const auto b = sweep_beta(make_distribution(Family::simple), betas, o);
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].est.theta.value, b.rows[i].est.theta.value);
    o.seed = 8;
    const auto c = sweep_beta(make_distribution(Family::simple), betas, o);
    EXPECT_NE(a.rows[0].est.theta.value, c.rows[0].est.theta.value);
}

TEST(SweepBeta, Rejections) {
    const std::vector<double> bad{0.0, 0.2, 0.1};
    EXPECT_THROW(sweep_beta(make_distribution(Family::simple), bad, quick()), ConfigError);
}

TEST(SweepSigma, ExcludesSimpleSaw) {
    const std::vector<int> bad{1, 2, 4};
    EXPECT_THROW(sweep_sigma(Family::uniform_range, bad, quick()), ConfigError);
    const std::vector<int> Ls{2, 3, 4};
    const auto rep = sweep_sigma(Family::uniform_range, Ls, quick());
    EXPECT_TRUE(std::isinf(rep.rows[0].beta));
    EXPECT_NEAR(rep.theta_ref_slope, 2.0 / 3.0, 1e-15);
}

TEST(SweepCoupled, Schedules) {
    const std::vector<int> ns{20, 40, 80};
    EXPECT_THROW(sweep_coupled(make_distribution(Family::simple), Schedule::beta, 2.0, ns, quick()), ConfigError);
    auto o = quick();
    o.allow_invalid_schedule = true;
    EXPECT_NO_THROW(sweep_coupled(make_distribution(Family::simple), Schedule::beta, 2.0, ns, o));
    const auto rep = sweep_coupled(make_distribution(Family::simple), Schedule::beta, 0.75, ns, quick());
    for (const auto& r : rep.rows) EXPECT_NEAR(r.beta, std::pow(r.n, -0.75), 1e-12);
    EXPECT_NEAR(rep.theta_ref_slope, -0.25, 1e-15);
    const auto strip = sweep_coupled(make_distribution(Family::simple), Schedule::strip, 0.75, ns, quick());
    for (const auto& r : strip.rows) EXPECT_EQ(r.L, static_cast<int>(std::ceil(std::pow(r.n, 0.75))));
}

TEST(SweepAttraction, GammaScheduleAndBn) {
    const std::vector<double> bt{0.4, 0.2, 0.1};
    EXPECT_THROW(sweep_attraction(make_distribution(Family::simple), bt, 0.5, quick()), ConfigError);
    const auto rep = sweep_attraction(make_distribution(Family::simple), bt, 1.0, quick());
    for (const auto& r : rep.rows) {
        EXPECT_NEAR(r.gamma, r.param, 1e-15);
        EXPECT_NEAR(r.beta, 2 * r.param, 1e-15);
        EXPECT_GT(r.extra, 0.0);
    }
}

TEST(SweepStrip, AnchorAgainstEnumeration) {
    const std::vector<int> Ls{1, 2, 3};
    const auto rep = sweep_strip(make_distribution(Family::simple), Ls, quick());
    ASSERT_TRUE(rep.anchor.has_value());
    EXPECT_EQ(rep.anchor->n, 5);
    const auto exact = enumerate_measure(make_distribution(Family::simple), 5, ModelSpec::strip(1));
    EXPECT_NEAR(rep.anchor->exact, exact.mean_abs_endpoint() / 5.0, 1e-12);
    EXPECT_NEAR(rep.theta_ref_slope, -1.0 / 3.0, 1e-15);
}

TEST(Output, CsvAndJson) {
    const std::vector<double> betas{0.4, 0.2, 0.1};
    const auto rep = sweep_beta(make_distribution(Family::simple), betas, quick());
    std::ostringstream os;
    write_csv(os, rep);
    std::istringstream is(os.str());
    std::string header, line;
    std::getline(is, header);
    EXPECT_EQ(header.rfind("experiment,param,beta,gamma,L,sigma,n,theta_hat,theta_se,r_hat,r_se", 0), 0u);
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, 3);
    const auto j = nlohmann::json::parse(report_json(rep));
    EXPECT_EQ(j["rows"].size(), 3u);
    EXPECT_TRUE(j.contains("theta_fit"));
}
