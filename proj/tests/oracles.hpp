#pragma once

// Brute-force reference computations, written directly from the definitions and
// sharing no code with the library beyond StepDistribution's support and pmf.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "polymerlab/stepdist.hpp"

namespace oracle {

using Path = std::vector<long>;

inline Path positions(const std::vector<int>& steps) {
    Path p{0};
    for (int s : steps) p.push_back(p.back() + s);
    return p;
}

/// Calls fn(path, probability) for every n-step path.
inline void for_each_path(const polymerlab::StepDistribution& d, int n,
                          const std::function<void(const Path&, double)>& fn) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        std::vector<int> steps;
        double p = 1.0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            steps.push_back(d.steps()[idx[i]]);
            p *= d.probs()[idx[i]];
        }
        fn(positions(steps), p);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == d.size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
}

/// Ordered time pairs i != j with S_i = S_j.
inline std::int64_t H(const Path& p) {
    std::int64_t h = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            if (i != j && p[i] == p[j]) ++h;
    return h;
}

/// Ordered pairs among times 1..n only.
inline std::int64_t Hprime(const Path& p) {
    std::int64_t h = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        for (std::size_t j = 1; j < p.size(); ++j)
            if (i != j && p[i] == p[j]) ++h;
    return h;
}

/// Ordered time pairs at distance one.
inline std::int64_t neighbor_pairs(const Path& p) {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j)
            if (i != j && std::abs(p[i] - p[j]) == 1) ++c;
    return c;
}

inline std::int64_t G(const Path& p) {
    std::map<long, std::int64_t> l;
    for (long x : p) ++l[x];
    std::int64_t g = 0;
    for (long x = l.begin()->first - 1; x <= l.rbegin()->first; ++x) {
        const auto a = l.count(x) ? l[x] : 0;
        const auto b = l.count(x + 1) ? l[x + 1] : 0;
        g += (a - b) * (a - b);
    }
    return g;
}

inline bool self_avoiding(const Path& p) { return std::set<long>(p.begin(), p.end()).size() == p.size(); }

/// Fraction of height assignments in {-L..L}^{n+1} making (S_i, V_i) pairwise distinct.
inline double strip_by_heights(const Path& p, int L) {
    const int w = 2 * L + 1;
    std::vector<int> h(p.size(), 0);
    double good = 0, total = 0;
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < p.size() && ok; ++i)
            for (std::size_t j = i + 1; j < p.size() && ok; ++j)
                if (p[i] == p[j] && h[i] == h[j]) ok = false;
        good += ok;
        total += 1;
        std::size_t k = 0;
        while (k < h.size() && ++h[k] == w) h[k++] = 0;
        if (k == h.size()) break;
    }
    return good / total;
}

/// E(weight(path)) and E(weight(path) |S_n|) over all n-step paths.
struct Moments {
    double Z = 0.0;
    double abs_sum = 0.0;
    double mean_sum = 0.0;
    std::map<long, double> measure;
};

inline Moments weighted(const polymerlab::StepDistribution& d, int n, const std::function<double(const Path&)>& w) {
    Moments m;
    for_each_path(d, n, [&](const Path& p, double prob) {
        const double x = prob * w(p);
        m.Z += x;
        m.abs_sum += x * std::abs(static_cast<double>(p.back()));
        m.mean_sum += x * static_cast<double>(p.back());
        m.measure[p.back()] += x;
    });
    return m;
}

/// c_m and pi_m by definition for pieces of length T, m = 1..N.
struct Renewal {
    std::vector<double> c, pi;
};

inline Renewal renewal(const polymerlab::StepDistribution& d, int T, int N, bool saw, double beta, double mu) {
    Renewal r;
    r.c.assign(static_cast<std::size_t>(N) + 1, 0.0);
    r.pi.assign(static_cast<std::size_t>(N) + 1, 0.0);
    r.c[0] = 1.0;
    for (int m = 1; m <= N; ++m) {
        for_each_path(d, m * T, [&](const Path& p, double prob) {
            auto piece = [&](int i) { return Path(p.begin() + (i - 1) * T, p.begin() + i * T + 1); };
            double x = 1.0;
            for (int i = 1; i <= m; ++i) {
                const Path q = piece(i);
                x *= std::exp(mu * static_cast<double>(q.back() - q.front()));
                if (saw)
                    x *= self_avoiding(q) ? 1.0 : 0.0;
                else
                    x *= std::exp(-beta * static_cast<double>(H(q)));
            }
            double keep = 1.0, hit = 1.0;
            for (int i = 1; i < m; ++i) {
                const Path a = piece(i), b = piece(i + 1);
                // Coincidences between the pieces other than the shared point itself.
                std::int64_t k = 0;
                for (std::size_t s = 0; s + 1 < a.size(); ++s)
                    for (std::size_t t = 1; t < b.size(); ++t)
                        if (a[s] == b[t]) ++k;
                const double u = saw ? (k > 0 ? 1.0 : 0.0) : 1.0 - std::exp(-2.0 * beta * static_cast<double>(k));
                keep *= 1.0 - u;
                hit *= u;
            }
            r.c[static_cast<std::size_t>(m)] += prob * keep * x;
            r.pi[static_cast<std::size_t>(m)] += prob * hit * x;
        });
    }
    return r;
}

}  // namespace oracle
