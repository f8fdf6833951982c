#include "polymerlab/selftest.hpp"

#include <cmath>
#include <sstream>

#include "polymerlab/enumerate.hpp"
#include "polymerlab/hamiltonian.hpp"
#include "polymerlab/ratefn.hpp"
#include "polymerlab/renewal.hpp"
#include "polymerlab/rng.hpp"

namespace polymerlab {

namespace {

SelfCheck check(std::string name, bool pass, const std::string& detail = {}) {
    return {std::move(name), pass, detail};
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific;
    os.precision(2);
    os << v;
    return os.str();
}

std::vector<int> random_steps(const StepDistribution& d, int n, Rng& rng) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        std::size_t k = 0;
        while (k + 1 < d.size() && u >= d.probs()[k]) u -= d.probs()[k++];
        s.push_back(d.steps()[k]);
    }
    return s;
}

SelfCheck energy_identities() {
    Rng rng(20240601ULL, 0);
    int bad = 0;
    for (auto fam : {Family::simple, Family::uniform_range, Family::geometric_tail}) {
        const auto d = make_distribution(fam, 2);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 1 + static_cast<int>(rng.uniform() * 120);
            const auto steps = random_steps(d, n, rng);
            const auto path = LatticePath::from_steps(steps);
            PathState st;
            for (int s : steps) st.extend(s);
            const auto e = energy(path);
            std::int64_t pairs = 0;
            for (std::size_t i = 0; i < path.positions.size(); ++i)
                for (std::size_t j = 0; j < path.positions.size(); ++j)
                    if (i != j && path.positions[i] == path.positions[j]) ++pairs;
            const auto lt = local_times(path);
            const double canon = energy_attraction(e, 0.7, 0.3);
            const double lit = energy_attraction_literal(e, 0.7, 0.3);
            if (!(st.energy() == e) || pairs != e.H || e.Hprime != e.H - 2 * (lt.at(0) - 1) ||
                std::abs(lit - (canon - 0.3 * (n + 1))) > 1e-10)
                ++bad;
        }
    }
    return check("energy identities", bad == 0, std::to_string(bad) + " mismatching paths");
}

SelfCheck enumeration_closed_forms() {
    const auto simple = make_distribution(Family::simple, 1);
    double worst = 0.0;
    for (double b : {0.0, 0.1, 0.5, 1.0, 2.0}) {
        const auto r = enumerate_measure(simple, 2, ModelSpec::domb_joyce(b));
        worst = std::max(worst, std::abs(r.Z - (1.0 + std::exp(-2.0 * b)) / 2.0));
    }
    for (int n = 1; n <= 16; ++n) {
        const auto r = enumerate_measure(simple, n, ModelSpec::saw());
        worst = std::max(worst, std::abs(r.Z - std::pow(2.0, 1 - n)));
    }
    return check("enumeration closed forms", worst <= 1e-12, "max error " + sci(worst));
}

/// Probability that iid uniform heights make (S_i, V_i) pairwise distinct, by brute force.
double vertical_brute_force(const std::vector<long>& pos, int L) {
    const int w = 2 * L + 1;
    const std::size_t m = pos.size();
    std::vector<int> h(m, 0);
    long good = 0, total = 0;
    while (true) {
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i)
            for (std::size_t j = i + 1; j < m && ok; ++j)
                if (pos[i] == pos[j] && h[i] == h[j]) ok = false;
        good += ok;
        ++total;
        std::size_t k = 0;
        while (k < m && ++h[k] == w) h[k++] = 0;
        if (k == m) break;
    }
    return static_cast<double>(good) / static_cast<double>(total);
}

SelfCheck strip_exactness() {
    double worst = 0.0;
    for (int L = 1; L <= 2; ++L) {
        for (int n = 0; n <= 4; ++n) {
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<int> steps;
                for (int i = 0; i < n; ++i) steps.push_back((mask >> i) & 1 ? 1 : -1);
                const auto path = LatticePath::from_steps(steps);
                worst = std::max(worst, std::abs(strip_weight(local_times(path), L) -
                                                 vertical_brute_force(path.positions, L)));
            }
        }
    }
    return check("strip weight exactness", worst <= 1e-12, "max error " + sci(worst));
}

SelfCheck split_bound() {
    int violations = 0;
    for (auto fam : {Family::simple, Family::uniform_range}) {
        const auto d = make_distribution(fam, 2);
        for (double b : {0.1, 0.5})
            for (double mu : {0.0, 0.3})
                if (!split_bound_check(d, 8, 2, b, mu).holds()) ++violations;
    }
    return check("split bound", violations == 0, std::to_string(violations) + " violations");
}

SelfCheck renewal_worked_values() {
    PieceModel m{make_distribution(Family::simple, 1), 2};
    const auto s = compute_sequences(m, 4);
    const bool values = std::abs(s.c[1] - 0.5) < 1e-15 && std::abs(s.c[2] - 0.125) < 1e-15 &&
                        std::abs(s.c[3] - 1.0 / 32) < 1e-15 && std::abs(s.pi[2] - 0.125) < 1e-15 &&
                        std::abs(s.pi[3] - 1.0 / 32) < 1e-15 && std::abs(s.eps - 1.0 / std::sqrt(2.0)) < 1e-15;
    const double res = verify_renewal(s);
    bool bound = true;
    for (const auto& row : verify_pi_bound(s)) bound = bound && !row.violated;
    std::ostringstream os;
    os << "residual " << res;
    return check("renewal identity", values && res <= 1e-12 && bound, os.str());
}

SelfCheck bn_vs_enumeration() {
    double worst = 0.0;
    for (auto fam : {Family::simple, Family::uniform_range}) {
        const auto d = make_distribution(fam, 2);
        for (int n = 1; n <= 7; ++n) {
            std::vector<int> steps(static_cast<std::size_t>(n), 0);
            double eg = 0.0;
            std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
            while (true) {
                double p = 1.0;
                for (int i = 0; i < n; ++i) {
                    steps[static_cast<std::size_t>(i)] = d.steps()[idx[static_cast<std::size_t>(i)]];
                    p *= d.probs()[idx[static_cast<std::size_t>(i)]];
                }
                eg += p * static_cast<double>(energy(LatticePath::from_steps(steps)).G);
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == d.size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
            worst = std::max(worst, std::abs(eg - compute_bn(d, n).expected_G));
        }
    }
    return check("B_n against enumeration", worst <= 1e-10, "max error " + sci(worst));
}

}  // namespace

std::vector<SelfCheck> run_selftest() {
    return {energy_identities(), enumeration_closed_forms(), strip_exactness(), split_bound(),
            renewal_worked_values(), bn_vs_enumeration()};
}

}  // namespace polymerlab
