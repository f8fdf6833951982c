#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "polymerlab/enumerate.hpp"
#include "polymerlab/montecarlo.hpp"
#include "polymerlab/stepdist.hpp"

namespace polymerlab {

/// ge: S_n >= theta n. le: 0 <= S_n <= theta n.
enum class Side { ge, le };

std::string to_string(Side s);

struct RatePoint {
    double x = 0.0;  // theta, or b for scaled curves
    double value = 0.0;
    bool infinite = false;  // empty event
    Side side = Side::ge;
    int n = 0;
    double beta = 0.0;
    double gamma = 0.0;
    int L = 0;
    double argmax_mu = 0.0;       // Legendre curves only
    bool at_grid_edge = false;    // Legendre maximizer sits on a grid endpoint
};

struct RateCurve {
    std::vector<RatePoint> points;
    bool scaled = false;
    std::vector<std::string> warnings;
};

/// Paper's published Edwards-model constants.
struct ReferenceConstants {
    static constexpr double a_star = 2.19;
    static constexpr double b_star = 1.11;
    static constexpr double c_star = 0.63;
    static constexpr double b_dstar = 0.85;
    static constexpr double rho_a_dstar = 0.78;
};

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

/// -(1/n) log of the constrained partition value; +inf when the event is empty.
double finite_rate(const EnumerationResult& measure, double theta, Side side);
double finite_rate(const StepDistribution& dist, int n, const ModelSpec& model, double theta, Side side,
                   double leaf_budget = kDefaultLeafBudget);
/// Monte Carlo version: constrained weight sum over draws, pooled across replicas.
double finite_rate(std::span<const WeightedEnsemble> replicas, int n, double theta, Side side);

/// (1/n) log tilted_partition.
double finite_lambda(const StepDistribution& dist, int n, double beta, double mu, SignRestriction sign,
                     double leaf_budget = kDefaultLeafBudget);

/// Lambda evaluated on a mu grid.
struct LambdaGrid {
    std::vector<double> mu;
    std::vector<double> lambda;
};

LambdaGrid finite_lambda_grid(const StepDistribution& dist, int n, double beta, std::span<const double> mu,
                              SignRestriction sign, double leaf_budget = kDefaultLeafBudget);

/// max over the grid of (mu b - Lambda(mu)) for each b.
RateCurve legendre(const LambdaGrid& grid, std::span<const double> b_values);

/// beta^{-2/3} finite_rate at theta = b beta^{1/3}; side ge for b >= b* sigma^{2/3}.
RateCurve scaled_rate_curve(const StepDistribution& dist, int n, double beta, std::span<const double> b_grid,
                            double leaf_budget = kDefaultLeafBudget);

struct EdwardsPrediction {
    double theta = 0.0;
    double r = 0.0;
};

/// theta = b* sigma^{2/3} beta^{1/3}, r = a* sigma^{-2/3} beta^{2/3}; beta factors dropped at beta = inf.
EdwardsPrediction edwards_reference(double sigma, double beta);

/// B_n = 2 sum_{k=1}^n (n-k+1) [2P(S_k=0) - P(S_k=1) - P(S_k=-1)], E(G_n) = 2(n+1) + B_n.
struct BnResult {
    int n = 0;
    double B = 0.0;
    double expected_G = 0.0;
    std::vector<double> summands;  // d_k = 2P(S_k=0) - P(S_k=1) - P(S_k=-1), k = 1..n
};

BnResult compute_bn(const StepDistribution& dist, int n);
/// B_1..B_nmax in one pass (entry k-1 is B_k).
std::vector<double> bn_series(const StepDistribution& dist, int nmax);

}  // namespace polymerlab
