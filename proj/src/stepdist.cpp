#include "polymerlab/stepdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "polymerlab/errors.hpp"

namespace polymerlab {

std::string to_string(Family f) {
    switch (f) {
        case Family::simple: return "simple";
        case Family::uniform_range: return "uniform_range";
        case Family::geometric_tail: return "geometric_tail";
        case Family::custom: return "custom";
    }
    return "custom";
}

Family family_from_string(const std::string& name) {
    if (name == "simple") return Family::simple;
    if (name == "uniform_range" || name == "uniform") return Family::uniform_range;
    if (name == "geometric_tail" || name == "geometric") return Family::geometric_tail;
    if (name == "custom") return Family::custom;
    throw ConfigError("unknown step family '" + name + "'");
}

StepDistribution::StepDistribution(Family family, int parameter, std::vector<int> steps,
                                   std::vector<double> probs)
    : family_(family), parameter_(parameter), steps_(std::move(steps)), probs_(std::move(probs)) {
    if (steps_.empty() || steps_.size() != probs_.size())
        throw ConfigError("step distribution needs matching, non-empty support and pmf");

    std::vector<std::size_t> order(steps_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return steps_[a] < steps_[b]; });
    std::vector<int> s;
    std::vector<double> p;
    for (auto i : order) {
        if (!std::isfinite(probs_[i]) || probs_[i] < 0.0)
            throw ConfigError("step probabilities must be finite and non-negative");
        if (probs_[i] == 0.0) continue;
        if (!s.empty() && s.back() == steps_[i]) throw ConfigError("duplicate step in support");
        s.push_back(steps_[i]);
        p.push_back(probs_[i]);
    }
    if (s.empty()) throw ConfigError("step distribution has no mass");
    steps_ = std::move(s);
    probs_ = std::move(p);

    double total = 0.0;
    for (double q : probs_) total += q;
    if (!(total > 0.0) || !std::isfinite(total)) throw ConfigError("step distribution is not normalizable");
    for (double& q : probs_) q /= total;

    double m = 0.0, m2 = 0.0, check = 0.0;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        m += probs_[i] * steps_[i];
        m2 += probs_[i] * static_cast<double>(steps_[i]) * steps_[i];
        check += probs_[i];
    }
    if (std::abs(check - 1.0) > 1e-12) throw InvariantError("pmf does not sum to 1");
    if (std::abs(m) > 1e-12) throw ConfigError("step distribution must have zero mean");
    mean_ = m;
    variance_ = m2 - m * m;
    if (!(variance_ > 0.0)) throw ConfigError("step distribution must have positive variance");

    log_probs_.reserve(probs_.size());
    for (double q : probs_) log_probs_.push_back(std::log(q));
}

double StepDistribution::sigma() const { return std::sqrt(variance_); }

int StepDistribution::max_step() const {
    return std::max(std::abs(steps_.front()), std::abs(steps_.back()));
}

double StepDistribution::pmf(int x) const {
    auto it = std::lower_bound(steps_.begin(), steps_.end(), x);
    if (it == steps_.end() || *it != x) return 0.0;
    return probs_[static_cast<std::size_t>(it - steps_.begin())];
}

std::string StepDistribution::describe() const {
    std::ostringstream os;
    os << to_string(family_);
    if (family_ != Family::custom) os << "(L=" << parameter_ << ")";
    os << " sigma^2=" << variance_;
    return os.str();
}

StepDistribution make_distribution(Family family, int L) {
    switch (family) {
        case Family::simple: {
            auto d = make_distribution(Family::uniform_range, 1);
            return StepDistribution(Family::simple, 1, d.steps(), d.probs());
        }
        case Family::uniform_range: {
            if (L < 1) throw ConfigError("uniform_range requires L >= 1");
            std::vector<int> s;
            std::vector<double> p;
            for (int x = -L; x <= L; ++x) {
                if (x == 0) continue;
                s.push_back(x);
                p.push_back(1.0 / (2.0 * L));
            }
            return StepDistribution(family, L, std::move(s), std::move(p));
        }
        case Family::geometric_tail: {
            if (L < 2) throw ConfigError("geometric_tail requires L >= 2 (L = 1 is degenerate)");
            // Mass beyond |x| > K is q^K; cut where it drops below the cutoff.
            const double q = (L - 1.0) / L;
            const int K = static_cast<int>(std::ceil(std::log(kGeometricTailCutoff) / std::log(q)));
            std::vector<int> s;
            std::vector<double> p;
            for (int x = -K; x <= K; ++x) {
                if (x == 0) continue;
                s.push_back(x);
                p.push_back(std::pow(q, std::abs(x) - 1) / (2.0 * L));
            }
            return StepDistribution(family, L, std::move(s), std::move(p));
        }
        case Family::custom:
            throw ConfigError("custom distributions are built with make_custom");
    }
    throw ConfigError("unknown family");
}

StepDistribution make_custom(const std::map<int, double>& pmf) {
    std::vector<int> s;
    std::vector<double> p;
    for (auto [x, q] : pmf) {
        s.push_back(x);
        p.push_back(q);
    }
    return StepDistribution(Family::custom, 0, std::move(s), std::move(p));
}

std::complex<double> char_fn(const StepDistribution& dist, double t) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double a = t * dist.steps()[i];
        acc += dist.probs()[i] * std::complex<double>(std::cos(a), std::sin(a));
    }
    return acc;
}

double LatticePmf::at(long x) const {
    if (x < min_value || x > max_value()) return 0.0;
    return mass[static_cast<std::size_t>(x - min_value)];
}

double LatticePmf::total() const {
    double t = 0.0;
    for (double m : mass) t += m;
    return t;
}

LatticePmf convolve_step(const LatticePmf& law, const StepDistribution& dist) {
    const int lo = dist.steps().front();
    const int hi = dist.steps().back();
    LatticePmf out;
    out.min_value = law.min_value + lo;
    out.mass.assign(law.mass.size() + static_cast<std::size_t>(hi - lo), 0.0);
    for (std::size_t i = 0; i < law.mass.size(); ++i) {
        const double m = law.mass[i];
        if (m == 0.0) continue;
        for (std::size_t j = 0; j < dist.size(); ++j)
            out.mass[i + static_cast<std::size_t>(dist.steps()[j] - lo)] += m * dist.probs()[j];
    }
    return out;
}

LatticePmf step_law_convolution(const StepDistribution& dist, int k, std::size_t support_cap) {
    if (k < 0) throw ConfigError("convolution power must be non-negative");
    const auto width = static_cast<std::size_t>(dist.steps().back() - dist.steps().front());
    if (static_cast<double>(width) * k + 1.0 > static_cast<double>(support_cap))
        throw BudgetError("convolution support exceeds the configured cap");
    LatticePmf law{0, {1.0}};
    for (int i = 0; i < k; ++i) law = convolve_step(law, dist);
    return law;
}

ConditionReport check_condition(const StepDistribution& dist, double c1, double N, double eps) {
    ConditionReport r;
    r.L = dist.parameter();
    r.sigma = dist.sigma();
    const double s = r.sigma;
    double pmax = 0.0;
    double min_scaled = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double x = dist.steps()[i];
        const double p = dist.probs()[i];
        const double z = x / s;
        if (std::abs(z) > N) r.truncated_second_moment += z * z * p;
        pmax = std::max(pmax, p);
        r.exp_moment += p * std::exp(eps * std::abs(z));
    }
    // The minimum runs over all lattice points 0 < |x| <= c1 s, including gaps in the
    // support; |x| = 1 is always included so the minimum is never vacuous.
    const long reach = std::max(1L, static_cast<long>(std::floor(c1 * s)));
    for (long x = -reach; x <= reach; ++x) {
        if (x == 0) continue;
        min_scaled = std::min(min_scaled, s * dist.pmf(static_cast<int>(x)));
    }
    r.min_scaled_pmf = min_scaled;
    r.max_pmf_scaled = std::cbrt(r.sigma * r.sigma) * pmax;
    return r;
}

std::vector<ConditionReport> check_conditions(Family family, const std::vector<int>& Ls, double c1,
                                              double N, double eps) {
    if (!(c1 > 0.0) || !(N > 0.0) || !(eps > 0.0)) throw ConfigError("condition parameters must be positive");
    std::vector<ConditionReport> out;
    out.reserve(Ls.size());
    for (int L : Ls) out.push_back(check_condition(make_distribution(family, L), c1, N, eps));
    return out;
}

}  // namespace polymerlab
