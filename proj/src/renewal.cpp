#include "polymerlab/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polymerlab/errors.hpp"
#include "polymerlab/numeric.hpp"

namespace polymerlab {

void PieceModel::validate() const {
    if (piece_len < 1) throw ConfigError("piece length must be >= 1");
    if (mode == PieceMode::domb_joyce && (!(beta >= 0.0) || !std::isfinite(beta)))
        throw ConfigError("piece Domb-Joyce mode needs finite beta >= 0");
    if (!std::isfinite(mu)) throw ConfigError("tilt must be finite");
    if (window_center && !(window_half_width >= 0.0)) throw ConfigError("window half-width must be >= 0");
    if (!(delta >= 0.0)) throw ConfigError("confinement delta must be >= 0");
}

namespace {

/// Accumulates c_m and pi_m over all paths of N pieces by depth-first search.
class SequenceWalker {
public:
    SequenceWalker(const PieceModel& m, int N) : m_(m), N_(N), T_(m.piece_len) {
        pos_.reserve(static_cast<std::size_t>(N * T_) + 1);
        pos_.push_back(0);
        cprod_.assign(static_cast<std::size_t>(N) + 1, 0.0);
        pprod_.assign(static_cast<std::size_t>(N) + 1, 0.0);
        cprod_[0] = 1.0;
        pprod_[0] = 1.0;
        c_.resize(static_cast<std::size_t>(N) + 1);
        pi_.resize(static_cast<std::size_t>(N) + 1);
    }

    void run_from(int first_step_index) {
        const auto& steps = m_.dist.steps();
        const auto i = static_cast<std::size_t>(first_step_index);
        pos_.push_back(steps[i]);
        walk(1, m_.dist.probs()[i]);
        pos_.pop_back();
    }

    std::vector<KahanSum> c_, pi_;

private:
    void walk(int depth, double prob) {
        if (depth > 0 && depth % T_ == 0) {
            const int piece = depth / T_;
            if (!close_piece(piece, prob)) return;
            if (piece == N_) return;
        }
        const auto& steps = m_.dist.steps();
        const auto& probs = m_.dist.probs();
        for (std::size_t i = 0; i < steps.size(); ++i) {
            pos_.push_back(pos_.back() + steps[i]);
            walk(depth + 1, prob * probs[i]);
            pos_.pop_back();
        }
    }

    long at(int j) const { return pos_[static_cast<std::size_t>(j)]; }

    /// X_i of piece i (indices (i-1)T .. iT).
    double piece_x(int i) const {
        const int a = (i - 1) * T_, b = i * T_;
        const long d = at(b) - at(a);
        if (m_.window_center && std::abs(static_cast<double>(d) - *m_.window_center) > m_.window_half_width + 1e-9)
            return 0.0;
        if (std::isfinite(m_.delta)) {
            const double lo = -m_.delta, hi = static_cast<double>(d) + m_.delta;
            for (int j = a; j <= b; ++j) {
                const double y = static_cast<double>(at(j) - at(a));
                if (y < lo - 1e-9 || y > hi + 1e-9) return 0.0;
            }
        }
        std::int64_t coincidences = 0;
        for (int j = a; j <= b; ++j)
            for (int k = j + 1; k <= b; ++k)
                if (at(j) == at(k)) ++coincidences;
        double x = std::exp(m_.mu * static_cast<double>(d));
        if (m_.mode == PieceMode::saw) {
            if (coincidences > 0) return 0.0;
        } else {
            x *= std::exp(-m_.beta * 2.0 * static_cast<double>(coincidences));
        }
        return x;
    }

    /// U_i between pieces i and i+1 (the latter ends at the current depth).
    double piece_u(int i) const {
        const int a = (i - 1) * T_, mid = i * T_, b = (i + 1) * T_;
        std::int64_t k_cross = 0;
        for (int j = a; j < mid; ++j)
            for (int k = mid + 1; k <= b; ++k)
                if (at(j) == at(k)) ++k_cross;
        if (m_.mode == PieceMode::saw) return k_cross > 0 ? 1.0 : 0.0;
        return -std::expm1(-2.0 * m_.beta * static_cast<double>(k_cross));
    }

    bool close_piece(int piece, double prob) {
        const auto p = static_cast<std::size_t>(piece);
        const double x = piece_x(piece);
        if (piece == 1) {
            cprod_[1] = x;
            pprod_[1] = x;
        } else {
            const double u = piece_u(piece - 1);
            cprod_[p] = cprod_[p - 1] * (1.0 - u) * x;
            pprod_[p] = pprod_[p - 1] * u * x;
        }
        c_[p].add(prob * cprod_[p]);
        pi_[p].add(prob * pprod_[p]);
        return cprod_[p] != 0.0 || pprod_[p] != 0.0;
    }

    const PieceModel& m_;
    int N_, T_;
    std::vector<long> pos_;
    std::vector<double> cprod_, pprod_;
};

}  // namespace

RenewalSequences compute_sequences(const PieceModel& model, int N, double leaf_budget) {
    model.validate();
    if (N < 1) throw ConfigError("need at least one piece");
    const double leaves = enumeration_leaves(model.dist, N * model.piece_len);
    if (leaves > leaf_budget) {
        std::ostringstream os;
        os << "renewal enumeration needs " << leaves << " leaves, above the budget of " << leaf_budget;
        throw BudgetError(os.str());
    }
    const std::size_t m = model.dist.size();
    std::vector<SequenceWalker> walkers;
    walkers.reserve(m);
    for (std::size_t i = 0; i < m; ++i) walkers.emplace_back(model, N);
    parallel_for(m, [&](std::size_t i) { walkers[i].run_from(static_cast<int>(i)); });

    RenewalSequences s;
    s.c.assign(static_cast<std::size_t>(N) + 1, 0.0);
    s.pi.assign(static_cast<std::size_t>(N) + 1, 0.0);
    for (int k = 1; k <= N; ++k) {
        KahanSum c, p;
        for (const auto& w : walkers) {
            c.add(w.c_[static_cast<std::size_t>(k)].value());
            p.add(w.pi_[static_cast<std::size_t>(k)].value());
        }
        s.c[static_cast<std::size_t>(k)] = c.value();
        s.pi[static_cast<std::size_t>(k)] = p.value();
    }
    s.c[0] = 1.0;
    s.pi[1] = s.c[1];  // identical by definition; pin it against summation-order noise
    if (!(s.c[1] > 0.0))
        s.eps = std::numeric_limits<double>::infinity();
    else if (N >= 2)
        s.eps = std::sqrt(s.pi[2]) / s.c[1];
    return s;
}

std::vector<double> renewal_residuals(const RenewalSequences& s) {
    std::vector<double> r;
    for (int n = 1; n <= s.N(); ++n) {
        KahanSum rhs;
        rhs.add(s.c[1] * s.c[static_cast<std::size_t>(n - 1)]);
        for (int m = 2; m <= n; ++m) {
            const double sign = (m % 2 == 0) ? -1.0 : 1.0;
            rhs.add(sign * s.pi[static_cast<std::size_t>(m)] * s.c[static_cast<std::size_t>(n - m)]);
        }
        r.push_back(std::abs(s.c[static_cast<std::size_t>(n)] - rhs.value()));
    }
    return r;
}

double verify_renewal(const RenewalSequences& s) {
    const auto r = renewal_residuals(s);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

std::vector<PiBoundRow> verify_pi_bound(const RenewalSequences& s) {
    std::vector<PiBoundRow> rows;
    const double c1 = s.c.size() > 1 ? s.c[1] : 0.0;
    for (int m = 2; m <= s.N(); ++m) {
        PiBoundRow row;
        row.m = m;
        row.pi = s.pi[static_cast<std::size_t>(m)];
        row.bound = std::pow(s.eps, m - 1) * std::pow(c1, m);
        row.violated = row.pi > row.bound * (1.0 + 1e-12) + 1e-300;
        rows.push_back(row);
    }
    return rows;
}

ContractionResult contraction_iteration(const RenewalSequences& s, double eta) {
    if (!(eta > 0.0)) throw ConfigError("eta must be positive");
    if (s.N() < 1 || !(s.c[1] > 0.0)) throw ConfigError("contraction needs c_1 > 0");
    ContractionResult r;
    r.eta = eta;
    r.eps = s.eps;
    r.hypothesis_holds = s.eps < eta;
    if (!r.hypothesis_holds) {
        std::ostringstream os;
        os << "eps = " << s.eps << " is not below eta = " << eta;
        throw HypothesisError(os.str());
    }
    const double c1 = s.c[1];
    auto F = [&](double z) {
        KahanSum acc;
        acc.add(1.0 - z);
        for (int m = 2; m <= s.N(); ++m) {
            const double sign = (m % 2 == 0) ? -1.0 : 1.0;
            acc.add(-sign * s.pi[static_cast<std::size_t>(m)] * std::pow(z / c1, m));
        }
        return acc.value();
    };
    // First sign change of F on (0, min(1/eta, 2)], then bisection.
    const double z_max = std::min(1.0 / eta, 2.0);
    double lo = 0.0, hi = 0.0;
    bool found = false;
    constexpr int scan = 4000;
    for (int k = 1; k <= scan; ++k) {
        const double z = z_max * k / scan;
        if (F(z) <= 0.0) {
            hi = z;
            lo = z_max * (k - 1) / scan;
            found = true;
            break;
        }
    }
    if (!found) throw HypothesisError("no root of the z equation below min(1/eta, 2)");
    if (F(hi) == 0.0) {
        r.z = hi;
    } else {
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (F(mid) > 0.0 ? lo : hi) = mid;
        }
        r.z = 0.5 * (lo + hi);
    }
    // Exact roots (e.g. pi_m = 0) should come out exact.
    if (F(1.0) == 0.0 && std::abs(r.z - 1.0) < 1e-9) r.z = 1.0;
    const double ez = s.eps * r.z;
    r.tail_bound = ez < 1.0 ? std::pow(s.eps, s.N()) * std::pow(r.z, s.N() + 1) / (1.0 - ez)
                            : std::numeric_limits<double>::infinity();
    for (int n = 0; n <= s.N(); ++n) r.A.push_back(s.c[static_cast<std::size_t>(n)] * std::pow(r.z / c1, n));
    for (int n = 1; n <= s.N(); ++n)
        r.dA.push_back(std::abs(r.A[static_cast<std::size_t>(n)] - r.A[static_cast<std::size_t>(n - 1)]));
    // Least-squares slope of log |A_N - A_{N-1}| in N.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = 1; n <= s.N(); ++n) {
        const double d = r.dA[static_cast<std::size_t>(n - 1)];
        if (!(d > 0.0)) continue;
        const double y = std::log(d);
        sx += n;
        sy += y;
        sxx += static_cast<double>(n) * n;
        sxy += n * y;
        ++cnt;
    }
    if (cnt >= 2) {
        const double den = cnt * sxx - sx * sx;
        if (den > 0.0) r.decay_rate = std::exp((cnt * sxy - sx * sy) / den);
    }
    r.lower_bound_holds = 1.0 / r.z >= 1.0 - 3.0 * eta;
    return r;
}

}  // namespace polymerlab
