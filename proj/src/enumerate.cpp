#include "polymerlab/enumerate.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "polymerlab/errors.hpp"
#include "polymerlab/numeric.hpp"

namespace polymerlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_budget(const StepDistribution& dist, int n, double leaf_budget) {
    if (n < 0) throw ConfigError("path length must be non-negative");
    const double leaves = enumeration_leaves(dist, n);
    if (leaves > leaf_budget) {
        std::ostringstream os;
        os << "enumeration of " << n << " steps over " << dist.size() << " step values needs " << leaves
           << " leaf visits, above the budget of " << leaf_budget;
        throw BudgetError(os.str());
    }
}

/// Per-endpoint log-sums over a contiguous endpoint range.
struct EndpointSums {
    long lo = 0;
    std::vector<LogSum> sums;

    EndpointSums(long lo_, long hi_) : lo(lo_), sums(static_cast<std::size_t>(hi_ - lo_ + 1)) {}
    void add(long x, double log_w) { sums[static_cast<std::size_t>(x - lo)].add_log(log_w); }
    void merge(const EndpointSums& o) {
        for (std::size_t i = 0; i < sums.size(); ++i) sums[i].merge(o.sums[i]);
    }
};

/// Depth-first walk over all n-step paths. `leaf_log_weight(state)` gives the
/// model log-weight of a finished path; branches whose step factor is -inf under
/// `prune` are skipped since their weight stays zero.
template <class LeafWeight>
void dfs(const StepDistribution& dist, int remaining, const ModelSpec& prune, bool can_prune, PathState& st,
         double log_p, const LeafWeight& leaf_log_weight, EndpointSums& out) {
    if (remaining == 0) {
        const double lw = leaf_log_weight(st);
        if (lw != kNegInf) out.add(st.position(), log_p + lw);
        return;
    }
    const auto& steps = dist.steps();
    const auto& lps = dist.log_probs();
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (can_prune && prune.step_log_factor(st, st.position() + steps[i]) == kNegInf) continue;
        st.extend(steps[i]);
        dfs(dist, remaining - 1, prune, can_prune, st, log_p + lps[i], leaf_log_weight, out);
        st.retract();
    }
}

/// Endpoint log-measure, partitioned on the first step and merged in support order.
template <class LeafWeight>
EndpointSums endpoint_log_measure(const StepDistribution& dist, int n, const ModelSpec& prune,
                                  const LeafWeight& leaf_log_weight, double leaf_budget) {
    check_budget(dist, n, leaf_budget);
    const long lo = static_cast<long>(n) * dist.steps().front();
    const long hi = static_cast<long>(n) * dist.steps().back();
    const bool can_prune = prune.kind == ModelKind::saw || prune.kind == ModelKind::strip;
    const int strip_L = prune.state_strip_L();
    EndpointSums total(lo, hi);
    if (n == 0) {
        PathState st(strip_L);
        dfs(dist, 0, prune, can_prune, st, 0.0, leaf_log_weight, total);
        return total;
    }
    std::vector<EndpointSums> parts(dist.size(), EndpointSums(lo, hi));
    parallel_for(dist.size(), [&](std::size_t i) {
        PathState st(strip_L);
        if (can_prune && prune.step_log_factor(st, dist.steps()[i]) == kNegInf) return;
        st.extend(dist.steps()[i]);
        dfs(dist, n - 1, prune, can_prune, st, dist.log_probs()[i], leaf_log_weight, parts[i]);
    });
    for (const auto& p : parts) total.merge(p);
    return total;
}

bool sign_ok(long x, SignRestriction sign) {
    switch (sign) {
        case SignRestriction::none: return true;
        case SignRestriction::nonnegative: return x >= 0;
        case SignRestriction::nonpositive: return x <= 0;
    }
    return true;
}

}  // namespace

double enumeration_leaves(const StepDistribution& dist, int n) {
    return std::pow(static_cast<double>(dist.size()), n);
}

double EnumerationResult::mean_endpoint() const {
    KahanSum s;
    for (auto [x, p] : endpoint_pmf) s.add(p * static_cast<double>(x));
    return s.value();
}

double EnumerationResult::mean_abs_endpoint() const {
    KahanSum s;
    for (auto [x, p] : endpoint_pmf) s.add(p * std::abs(static_cast<double>(x)));
    return s.value();
}

double EnumerationResult::variance_abs_endpoint() const {
    const double m = mean_abs_endpoint();
    KahanSum s;
    for (auto [x, p] : endpoint_pmf) {
        const double d = std::abs(static_cast<double>(x)) - m;
        s.add(p * d * d);
    }
    return s.value();
}

EnumerationResult enumerate_measure(const StepDistribution& dist, int n, const ModelSpec& model,
                                    double leaf_budget) {
    model.validate();
    auto sums = endpoint_log_measure(
        dist, n, model, [&](const PathState& st) { return model.log_weight(st); }, leaf_budget);

    EnumerationResult r;
    r.n = n;
    r.model = model;
    LogSum z;
    for (std::size_t i = 0; i < sums.sums.size(); ++i) {
        if (sums.sums[i].empty()) continue;
        const long x = sums.lo + static_cast<long>(i);
        const double lv = sums.sums[i].log_value();
        if (lv == kNegInf) continue;
        r.log_raw_measure[x] = lv;
        r.raw_measure[x] = std::exp(lv);
        z.add_log(lv);
    }
    r.logZ = z.log_value();
    r.Z = std::exp(r.logZ);
    if (r.logZ != kNegInf) {
        for (auto [x, lv] : r.log_raw_measure) r.endpoint_pmf[x] = std::exp(lv - r.logZ);
    }
    return r;
}

std::map<long, double> log_tilted_endpoint_measure(const StepDistribution& dist, int n, double beta,
                                                  double leaf_budget) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("tilted partition needs finite beta >= 0");
    const ModelSpec free_walk = ModelSpec::domb_joyce(0.0);
    auto sums = endpoint_log_measure(
        dist, n, free_walk,
        [&](const PathState& st) { return -beta * static_cast<double>(st.energy().Hprime); }, leaf_budget);
    std::map<long, double> out;
    for (std::size_t i = 0; i < sums.sums.size(); ++i)
        if (!sums.sums[i].empty()) out[sums.lo + static_cast<long>(i)] = sums.sums[i].log_value();
    return out;
}

double log_tilted_partition(const std::map<long, double>& log_measure, double mu, SignRestriction sign) {
    LogSum z;
    for (auto [x, lv] : log_measure)
        if (sign_ok(x, sign)) z.add_log(lv + mu * static_cast<double>(x));
    return z.log_value();
}

double log_tilted_partition(const StepDistribution& dist, int n, double beta, double mu, SignRestriction sign,
                            double leaf_budget) {
    return log_tilted_partition(log_tilted_endpoint_measure(dist, n, beta, leaf_budget), mu, sign);
}

double tilted_partition(const StepDistribution& dist, int n, double beta, double mu, SignRestriction sign,
                        double leaf_budget) {
    return std::exp(log_tilted_partition(dist, n, beta, mu, sign, leaf_budget));
}

bool EndpointConstraint::admits(long endpoint, int n) const {
    // Tolerance keeps theta * n = integer boundaries inclusive despite rounding.
    constexpr double tol = 1e-9;
    const double x = static_cast<double>(endpoint);
    const double t = theta * n;
    switch (kind) {
        case Kind::at_least: return x >= t - tol;
        case Kind::between_zero_and: return x >= 0.0 && x <= t + tol;
        case Kind::window: return std::abs(x - center) <= half_width + tol;
        case Kind::near: return x >= std::floor(t + tol) && x <= std::ceil(t - tol);
    }
    return false;
}

double log_constrained_partition(const EnumerationResult& measure, const EndpointConstraint& c) {
    LogSum z;
    for (auto [x, lv] : measure.log_raw_measure)
        if (c.admits(x, measure.n)) z.add_log(lv);
    return z.log_value();
}

double log_constrained_partition(const StepDistribution& dist, int n, const ModelSpec& model,
                                 const EndpointConstraint& c, double leaf_budget) {
    return log_constrained_partition(enumerate_measure(dist, n, model, leaf_budget), c);
}

double constrained_partition(const StepDistribution& dist, int n, const ModelSpec& model,
                             const EndpointConstraint& c, double leaf_budget) {
    return std::exp(log_constrained_partition(dist, n, model, c, leaf_budget));
}

SplitBound split_bound_check(const StepDistribution& dist, int n, int T, double beta, double mu,
                             double leaf_budget) {
    if (T < 1 || n < T || n % T != 0) throw ConfigError("split bound needs 1 <= T dividing n");
    SplitBound b;
    b.log_lhs = log_tilted_partition(dist, n, beta, mu, SignRestriction::none, leaf_budget);
    b.log_rhs = (static_cast<double>(n) / T) *
                log_tilted_partition(dist, T, beta, mu, SignRestriction::none, leaf_budget);
    b.lhs = std::exp(b.log_lhs);
    b.rhs = std::exp(b.log_rhs);
    return b;
}

}  // namespace polymerlab
