#include "polymerlab/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polymerlab/errors.hpp"
#include "polymerlab/numeric.hpp"

namespace polymerlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

EndpointConstraint constraint_for(double theta, Side side) {
    return side == Side::ge ? EndpointConstraint::ge(theta) : EndpointConstraint::between(theta);
}

}  // namespace

std::string to_string(Side s) { return s == Side::ge ? "ge" : "le"; }

double finite_rate(const EnumerationResult& measure, double theta, Side side) {
    if (measure.n < 1) throw ConfigError("rate needs n >= 1");
    const double lz = log_constrained_partition(measure, constraint_for(theta, side));
    if (lz == kNegInf) return kInf;
    return -lz / measure.n;
}

double finite_rate(const StepDistribution& dist, int n, const ModelSpec& model, double theta, Side side,
                   double leaf_budget) {
    return finite_rate(enumerate_measure(dist, n, model, leaf_budget), theta, side);
}

double finite_rate(std::span<const WeightedEnsemble> replicas, int n, double theta, Side side) {
    if (n < 1) throw ConfigError("rate needs n >= 1");
    const auto c = constraint_for(theta, side);
    LogSum s;
    double draws = 0.0;
    for (const auto& e : replicas) {
        draws += static_cast<double>(e.draws);
        for (const auto& x : e.samples)
            if (c.admits(x.endpoint, n)) s.add_log(x.log_weight);
    }
    if (draws == 0.0) throw ConfigError("no Monte Carlo draws supplied");
    const double lz = s.log_value();
    if (lz == kNegInf) return kInf;
    return -(lz - std::log(draws)) / n;
}

double finite_lambda(const StepDistribution& dist, int n, double beta, double mu, SignRestriction sign,
                     double leaf_budget) {
    if (n < 1) throw ConfigError("lambda needs n >= 1");
    return log_tilted_partition(dist, n, beta, mu, sign, leaf_budget) / n;
}

LambdaGrid finite_lambda_grid(const StepDistribution& dist, int n, double beta, std::span<const double> mu,
                              SignRestriction sign, double leaf_budget) {
    if (n < 1) throw ConfigError("lambda needs n >= 1");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("lambda needs finite beta >= 0");
    const auto measure = log_tilted_endpoint_measure(dist, n, beta, leaf_budget);
    LambdaGrid g;
    g.mu.assign(mu.begin(), mu.end());
    g.lambda.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) g.lambda[i] = log_tilted_partition(measure, mu[i], sign) / n;
    return g;
}

RateCurve legendre(const LambdaGrid& grid, std::span<const double> b_values) {
    if (grid.mu.size() < 3 || grid.mu.size() != grid.lambda.size())
        throw ConfigError("Legendre transform needs at least 3 grid points");
    if (!std::is_sorted(grid.mu.begin(), grid.mu.end())) throw ConfigError("mu grid must be sorted");
    RateCurve c;
    const std::size_t last = grid.mu.size() - 1;
    for (double b : b_values) {
        RatePoint p;
        p.x = b;
        p.value = kNegInf;
        std::size_t arg = 0;
        for (std::size_t i = 0; i <= last; ++i) {
            const double v = grid.mu[i] * b - grid.lambda[i];
            if (v > p.value) {
                p.value = v;
                arg = i;
            }
        }
        p.argmax_mu = grid.mu[arg];
        p.at_grid_edge = arg == 0 || arg == last;
        if (p.at_grid_edge) {
            std::ostringstream os;
            os << "maximizer for b=" << b << " is the grid endpoint mu=" << p.argmax_mu << "; widen the window";
            c.warnings.push_back(os.str());
        }
        c.points.push_back(p);
    }
    return c;
}

RateCurve scaled_rate_curve(const StepDistribution& dist, int n, double beta, std::span<const double> b_grid,
                            double leaf_budget) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("scaled rate curve needs finite beta > 0");
    const auto measure = enumerate_measure(dist, n, ModelSpec::domb_joyce(beta), leaf_budget);
    const double b_switch = ReferenceConstants::b_star * std::pow(dist.sigma(), 2.0 / 3.0);
    const double scale = std::pow(beta, -2.0 / 3.0);
    RateCurve c;
    c.scaled = true;
    for (double b : b_grid) {
        RatePoint p;
        p.x = b;
        p.side = b >= b_switch ? Side::ge : Side::le;
        p.n = n;
        p.beta = beta;
        const double r = finite_rate(measure, b * std::cbrt(beta), p.side);
        p.infinite = std::isinf(r);
        p.value = p.infinite ? kInf : scale * r;
        c.points.push_back(p);
    }
    return c;
}

EdwardsPrediction edwards_reference(double sigma, double beta) {
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (!(beta > 0.0)) throw ConfigError("beta must be positive");
    const double s23 = std::pow(sigma, 2.0 / 3.0);
    EdwardsPrediction p;
    p.theta = ReferenceConstants::b_star * s23;
    p.r = ReferenceConstants::a_star / s23;
    if (std::isfinite(beta)) {
        p.theta *= std::cbrt(beta);
        p.r *= std::pow(beta, 2.0 / 3.0);
    }
    return p;
}

namespace {

/// d_k for k = 1..n.
std::vector<double> bn_summands(const StepDistribution& dist, int n) {
    if (n < 1) throw ConfigError("B_n needs n >= 1");
    const double support = 2.0 * n * dist.max_step() + 1.0;
    if (support > static_cast<double>(kConvolutionSupportCap))
        throw BudgetError("B_n convolution support exceeds the budget");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(n));
    LatticePmf law{0, {1.0}};
    for (int k = 1; k <= n; ++k) {
        law = convolve_step(law, dist);
        d.push_back(2.0 * law.at(0) - law.at(1) - law.at(-1));
    }
    return d;
}

}  // namespace

BnResult compute_bn(const StepDistribution& dist, int n) {
    BnResult r;
    r.n = n;
    r.summands = bn_summands(dist, n);
    KahanSum s;
    for (int k = 1; k <= n; ++k) s.add(static_cast<double>(n - k + 1) * r.summands[static_cast<std::size_t>(k - 1)]);
    r.B = 2.0 * s.value();
    r.expected_G = 2.0 * (n + 1) + r.B;
    return r;
}

std::vector<double> bn_series(const StepDistribution& dist, int nmax) {
    const auto d = bn_summands(dist, nmax);
    // B_n - B_{n-1} = 2 sum_{k<=n} d_k.
    std::vector<double> out;
    out.reserve(d.size());
    KahanSum partial, b;
    for (double dk : d) {
        partial.add(dk);
        b.add(2.0 * partial.value());
        out.push_back(b.value());
    }
    return out;
}

}  // namespace polymerlab
