#include "polymerlab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polymerlab/errors.hpp"
#include "polymerlab/numeric.hpp"
#include "polymerlab/rng.hpp"

namespace polymerlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_common(int n, const ModelSpec& model) {
    if (n < 1) throw ConfigError("Monte Carlo needs n >= 1");
    model.validate();
}

/// Step chooser over the pmf by inverse cdf.
class StepSampler {
public:
    explicit StepSampler(const StepDistribution& dist) : steps_(dist.steps()) {
        double acc = 0.0;
        for (double p : dist.probs()) {
            acc += p;
            cdf_.push_back(acc);
        }
    }
    int draw(Rng& rng) const {
        const double u = rng.uniform() * cdf_.back();
        const auto i = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
        return steps_[std::min(i, steps_.size() - 1)];
    }

private:
    std::vector<int> steps_;
    std::vector<double> cdf_;
};

}  // namespace

double WeightedEnsemble::log_total_weight() const {
    LogSum s;
    for (const auto& x : samples) s.add_log(x.log_weight);
    return s.log_value();
}

double WeightedEnsemble::log_Z() const {
    if (draws == 0) return kNegInf;
    return log_total_weight() - std::log(static_cast<double>(draws));
}

double WeightedEnsemble::effective_sample_size() const {
    if (samples.empty()) return 0.0;
    double m = kNegInf;
    for (const auto& x : samples) m = std::max(m, x.log_weight);
    if (m == kNegInf) return 0.0;
    KahanSum s1, s2;
    for (const auto& x : samples) {
        const double w = std::exp(x.log_weight - m);
        s1.add(w);
        s2.add(w * w);
    }
    return s1.value() * s1.value() / s2.value();
}

WeightedEnsemble sample_importance_replica(const StepDistribution& dist, int n, const ModelSpec& model,
                                           std::uint64_t samples, std::uint64_t seed, std::uint32_t replica) {
    check_common(n, model);
    if (model.kind == ModelKind::saw)
        throw ConfigError("importance sampling from the free walk needs finite beta; use PERM for SAW");
    const StepSampler sampler(dist);
    Rng rng(seed, replica);
    WeightedEnsemble out;
    out.seed = stream_seed(seed, replica);
    out.replica_id = replica;
    out.samples.reserve(samples);
    PathState st(model.state_strip_L());
    const double log_w0 = model.log_weight(st);
    for (std::uint64_t s = 0; s < samples; ++s) {
        double lw = log_w0;
        for (int k = 0; k < n; ++k) {
            const int step = sampler.draw(rng);
            if (lw != kNegInf) lw += model.step_log_factor(st, st.position() + step);
            st.extend(step);
        }
        ++out.draws;
        if (lw == kNegInf)
            ++out.zero_weight_draws;
        else
            out.samples.push_back({st.position(), lw, st.energy().H});
        for (int k = 0; k < n; ++k) st.retract();
    }
    return out;
}

std::vector<WeightedEnsemble> sample_importance(const StepDistribution& dist, int n, const ModelSpec& model,
                                                std::uint64_t samples_per_replica, std::uint32_t replicas,
                                                std::uint64_t seed) {
    check_common(n, model);
    if (replicas < 1) throw ConfigError("need at least one replica");
    std::vector<WeightedEnsemble> out(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        out[r] = sample_importance_replica(dist, n, model, samples_per_replica, seed, static_cast<std::uint32_t>(r));
    });
    return out;
}

WeightedEnsemble sample_perm_replica(const StepDistribution& dist, int n, const ModelSpec& model,
                                     std::uint64_t tours, std::uint64_t seed, std::uint32_t replica,
                                     const PermParams& params) {
    check_common(n, model);
    if (!(params.c_low > 0.0) || !(params.c_high > params.c_low))
        throw ConfigError("PERM thresholds need 0 < c_low < c_high");
    Rng rng(seed, replica);
    WeightedEnsemble out;
    out.seed = stream_seed(seed, replica);
    out.replica_id = replica;

    const auto& steps = dist.steps();
    const auto& probs = dist.probs();
    const std::size_t m = steps.size();
    const double log_c_low = std::log(params.c_low);
    const double log_c_high = std::log(params.c_high);
    const double log2 = std::log(2.0);

    // Running sum of chain weights reaching each depth, over all tours so far.
    std::vector<LogSum> depth_sum(static_cast<std::size_t>(n) + 1);
    std::vector<double> f(m), w(m);

    struct Frame {
        int copies;
        double log_w;
    };
    std::vector<Frame> stack;
    stack.reserve(static_cast<std::size_t>(n) + 1);
    PathState st(model.state_strip_L());
    // Weight of the bare starting point (nonzero for the attraction boundary terms).
    const double log_w0 = model.log_weight(st);

    for (std::uint64_t tour = 0; tour < tours; ++tour) {
        const double log_tours = std::log(static_cast<double>(tour + 1));
        std::uint64_t chains = 1;
        std::size_t leaves_before = out.samples.size();

        // Registers a chain of weight log_w at the current depth. Returns false
        // when the chain ends here (full length or pruned).
        auto enter = [&](double log_w) {
            const std::size_t k = static_cast<std::size_t>(st.n());
            depth_sum[k].add_log(log_w);
            if (st.n() == n) {
                out.samples.push_back({st.position(), log_w, st.energy().H});
                return false;
            }
            int copies = 1;
            const double log_mean = depth_sum[k].log_value() - log_tours;
            if (params.enrichment && log_w > log_mean + log_c_high && chains < params.max_chains_per_tour) {
                copies = 2;
                log_w -= log2;
                ++chains;
            } else if (params.pruning && log_w < log_mean + log_c_low) {
                if (rng.uniform() < 0.5) return false;
                log_w += log2;
            }
            stack.push_back({copies, log_w});
            return true;
        };

        enter(log_w0);
        while (!stack.empty()) {
            Frame& top = stack.back();
            if (top.copies == 0) {
                stack.pop_back();
                if (!stack.empty()) st.retract();
                continue;
            }
            --top.copies;
            const double log_w = top.log_w;
            ++out.chains_grown;

            // Rosenbluth atmosphere: candidate weights p(s) exp(step factor).
            double fmax = kNegInf;
            for (std::size_t i = 0; i < m; ++i) {
                f[i] = model.step_log_factor(st, st.position() + steps[i]);
                fmax = std::max(fmax, f[i]);
            }
            if (fmax == kNegInf) continue;  // trapped
            double atm = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                w[i] = f[i] == kNegInf ? 0.0 : probs[i] * std::exp(f[i] - fmax);
                atm += w[i];
            }
            const double u = rng.uniform() * atm;
            std::size_t pick = 0;
            double acc = w[0];
            while (pick + 1 < m && (acc <= u || w[pick] == 0.0)) acc += w[++pick];
            st.extend(steps[pick]);
            if (!enter(log_w + fmax + std::log(atm))) st.retract();
        }
        ++out.draws;
        if (out.samples.size() == leaves_before) ++out.zero_weight_draws;
    }
    return out;
}

std::vector<WeightedEnsemble> sample_perm(const StepDistribution& dist, int n, const ModelSpec& model,
                                          std::uint64_t tours_per_replica, std::uint32_t replicas,
                                          std::uint64_t seed, const PermParams& params) {
    check_common(n, model);
    if (replicas < 1) throw ConfigError("need at least one replica");
    std::vector<WeightedEnsemble> out(replicas);
    parallel_for(replicas, [&](std::size_t r) {
        out[r] = sample_perm_replica(dist, n, model, tours_per_replica, seed, static_cast<std::uint32_t>(r), params);
    });
    return out;
}

namespace {

/// Weighted moments of one replica, scaled by exp(-shift).
struct Moments {
    double w = 0.0, w_abs = 0.0, w_sq = 0.0, w_x = 0.0, w2 = 0.0;
    double draws = 0.0;

    Moments& operator+=(const Moments& o) {
        w += o.w;
        w_abs += o.w_abs;
        w_sq += o.w_sq;
        w_x += o.w_x;
        w2 += o.w2;
        draws += o.draws;
        return *this;
    }
};

struct Stats {
    double theta, r, sigma_star, mean_abs, mean, log_Z, Z;
};

Stats stats_of(const Moments& m, double shift, int n) {
    Stats s{};
    const double nn = static_cast<double>(n);
    s.mean_abs = m.w_abs / m.w;
    s.mean = m.w_x / m.w;
    s.theta = s.mean_abs / nn;
    const double var = std::max(0.0, m.w_sq / m.w - s.mean_abs * s.mean_abs);
    s.sigma_star = std::sqrt(var / nn);
    s.log_Z = shift + std::log(m.w / m.draws);
    s.r = -s.log_Z / nn;
    s.Z = std::exp(s.log_Z);
    return s;
}

}  // namespace

CltEstimate estimate_clt(std::span<const WeightedEnsemble> replicas, int n) {
    if (replicas.size() < 2) throw ConfigError("jackknife error bars need at least two replicas");
    if (n < 1) throw ConfigError("n must be >= 1");
    double shift = kNegInf;
    std::uint64_t samples = 0;
    for (const auto& e : replicas) {
        for (const auto& x : e.samples) shift = std::max(shift, x.log_weight);
        samples += e.samples.size();
    }
    if (shift == kNegInf) throw InvariantError("all replicas have zero total weight");

    const std::size_t R = replicas.size();
    // Each replica is kept at its own shift so a leave-one-out set never underflows.
    std::vector<Moments> per(R);
    std::vector<double> own(R, kNegInf);
    for (std::size_t r = 0; r < R; ++r) {
        for (const auto& x : replicas[r].samples) own[r] = std::max(own[r], x.log_weight);
        KahanSum w, wa, ws, wx, w2;
        for (const auto& x : replicas[r].samples) {
            const double wt = std::exp(x.log_weight - own[r]);
            const double ax = std::abs(static_cast<double>(x.endpoint));
            w.add(wt);
            wa.add(wt * ax);
            ws.add(wt * ax * ax);
            wx.add(wt * static_cast<double>(x.endpoint));
            w2.add(wt * wt);
        }
        per[r] = {w.value(), wa.value(), ws.value(), wx.value(), w2.value(),
                  static_cast<double>(replicas[r].draws)};
    }
    // Pool all replicas except `skip`, rescaled to shift `s`.
    auto pool = [&](std::size_t skip, double s) {
        Moments m;
        for (std::size_t r = 0; r < R; ++r) {
            if (r == skip) continue;
            Moments x = per[r];
            const double f = own[r] == kNegInf ? 0.0 : std::exp(own[r] - s);
            x.w *= f;
            x.w_abs *= f;
            x.w_sq *= f;
            x.w_x *= f;
            x.w2 *= f * f;
            m += x;
        }
        return m;
    };
    const Moments total = pool(R, shift);

    CltEstimate out;
    out.n = n;
    out.replicas = static_cast<std::uint32_t>(R);
    out.samples = samples;
    out.ess = total.w * total.w / total.w2;
    const Stats full = stats_of(total, shift, n);

    // Leave-one-replica-out jackknife.
    std::vector<Stats> loo;
    bool degenerate = false;
    for (std::size_t r = 0; r < R; ++r) {
        double s = kNegInf;
        for (std::size_t q = 0; q < R; ++q)
            if (q != r) s = std::max(s, own[q]);
        if (s == kNegInf) {
            degenerate = true;
            break;
        }
        loo.push_back(stats_of(pool(r, s), s, n));
    }
    if (degenerate) {
        out.warnings.push_back("only one replica carries weight; jackknife error bars are infinite");
        const double inf = std::numeric_limits<double>::infinity();
        out.theta = {full.theta, inf};
        out.r = {full.r, inf};
        out.sigma_star = {full.sigma_star, inf};
        out.mean_abs = {full.mean_abs, inf};
        out.mean = {full.mean, inf};
        out.log_Z = {full.log_Z, inf};
        out.Z = {full.Z, inf};
    }
    auto jack = [&](double Stats::*field) {
        double mean = 0.0;
        for (const auto& s : loo) mean += s.*field;
        mean /= static_cast<double>(R);
        double ss = 0.0;
        for (const auto& s : loo) ss += (s.*field - mean) * (s.*field - mean);
        return Estimate{full.*field, std::sqrt(ss * static_cast<double>(R - 1) / static_cast<double>(R))};
    };
    if (!degenerate) {
        out.theta = jack(&Stats::theta);
        out.r = jack(&Stats::r);
        out.sigma_star = jack(&Stats::sigma_star);
        out.mean_abs = jack(&Stats::mean_abs);
        out.mean = jack(&Stats::mean);
        out.log_Z = jack(&Stats::log_Z);
        out.Z = jack(&Stats::Z);
    }

    if (out.ess < 100.0) {
        std::ostringstream os;
        os << "effective sample size " << out.ess << " is below 100";
        out.warnings.push_back(os.str());
    }
    for (const auto& e : replicas) {
        if (e.draws > 0 && e.zero_weight_draws * 2 > e.draws) {
            std::ostringstream os;
            os << "replica " << e.replica_id << ": " << e.zero_weight_draws << " of " << e.draws
               << " draws carried zero weight";
            out.warnings.push_back(os.str());
        }
    }
    return out;
}

}  // namespace polymerlab
