#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <utility>

#include "polymerlab/model.hpp"
#include "polymerlab/stepdist.hpp"

namespace polymerlab {

/// Default cap on leaf visits of a depth-first enumeration.
inline constexpr double kDefaultLeafBudget = 1e8;

/// Exact weighted endpoint law of n-step paths under a model.
struct EnumerationResult {
    int n = 0;
    ModelSpec model;
    double Z = 0.0;
    double logZ = -std::numeric_limits<double>::infinity();
    /// E(weight; S_n = x) and its logarithm.
    std::map<long, double> raw_measure;
    std::map<long, double> log_raw_measure;
    /// raw_measure / Z; empty when Z = 0.
    std::map<long, double> endpoint_pmf;

    double mean_endpoint() const;
    double mean_abs_endpoint() const;
    double variance_abs_endpoint() const;
};

EnumerationResult enumerate_measure(const StepDistribution& dist, int n, const ModelSpec& model,
                                    double leaf_budget = kDefaultLeafBudget);

enum class SignRestriction { none, nonnegative, nonpositive };

/// E(exp(-beta H'_n) exp(mu S_n) [sign restriction on S_n]) with H'_n the
/// self-intersections among times 1..n. Returned in log form.
double log_tilted_partition(const StepDistribution& dist, int n, double beta, double mu,
                            SignRestriction sign, double leaf_budget = kDefaultLeafBudget);
double tilted_partition(const StepDistribution& dist, int n, double beta, double mu, SignRestriction sign,
                        double leaf_budget = kDefaultLeafBudget);

/// log E(exp(-beta H'_n) ; S_n = x) for every reachable x; tilting any mu is then a single pass.
std::map<long, double> log_tilted_endpoint_measure(const StepDistribution& dist, int n, double beta,
                                                  double leaf_budget = kDefaultLeafBudget);
double log_tilted_partition(const std::map<long, double>& log_measure, double mu, SignRestriction sign);

/// Endpoint events used by the constrained partition functions.
struct EndpointConstraint {
    enum class Kind { at_least, between_zero_and, window, near } kind = Kind::at_least;
    double theta = 0.0;       // drift for at_least / between_zero_and / near
    double center = 0.0;      // window center (lattice units)
    double half_width = 0.0;  // window half-width (lattice units)

    /// S_n >= theta n.
    static EndpointConstraint ge(double theta) { return {Kind::at_least, theta, 0.0, 0.0}; }
    /// 0 <= S_n <= theta n.
    static EndpointConstraint between(double theta) { return {Kind::between_zero_and, theta, 0.0, 0.0}; }
    /// |S_n - center| <= half_width.
    static EndpointConstraint window(double center, double half_width) {
        return {Kind::window, 0.0, center, half_width};
    }
    /// S_n in [floor(theta n), ceil(theta n)].
    static EndpointConstraint near(double theta) { return {Kind::near, theta, 0.0, 0.0}; }

    bool admits(long endpoint, int n) const;
};

double log_constrained_partition(const EnumerationResult& measure, const EndpointConstraint& c);
double log_constrained_partition(const StepDistribution& dist, int n, const ModelSpec& model,
                                 const EndpointConstraint& c, double leaf_budget = kDefaultLeafBudget);
double constrained_partition(const StepDistribution& dist, int n, const ModelSpec& model,
                             const EndpointConstraint& c, double leaf_budget = kDefaultLeafBudget);

/// Both sides of Z_n(mu) <= Z_T(mu)^{n/T} for the tilted Domb-Joyce partition
/// function without sign restriction.
struct SplitBound {
    double lhs = 0.0;
    double rhs = 0.0;
    double log_lhs = 0.0;
    double log_rhs = 0.0;
    bool holds(double rel_tol = 1e-10) const { return log_lhs <= log_rhs + std::log1p(rel_tol); }
};

SplitBound split_bound_check(const StepDistribution& dist, int n, int T, double beta, double mu,
                             double leaf_budget = kDefaultLeafBudget);

/// Number of leaves a depth-first enumeration of n steps may visit.
double enumeration_leaves(const StepDistribution& dist, int n);

}  // namespace polymerlab
