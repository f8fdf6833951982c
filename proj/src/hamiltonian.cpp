#include "polymerlab/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polymerlab/errors.hpp"

namespace polymerlab {

LatticePath LatticePath::from_steps(std::span<const int> steps) {
    LatticePath p;
    p.positions.reserve(steps.size() + 1);
    long x = 0;
    for (int s : steps) {
        x += s;
        p.positions.push_back(x);
    }
    return p;
}

std::int64_t LocalTimeField::at(long x) const {
    auto it = counts.find(x);
    return it == counts.end() ? 0 : it->second;
}

LocalTimeField local_times(const LatticePath& path) {
    LocalTimeField f;
    for (long x : path.positions) ++f.counts[x];
    f.total = static_cast<std::int64_t>(path.positions.size());
    return f;
}

EnergyState energy(const LatticePath& path) {
    const auto f = local_times(path);
    EnergyState e;
    std::int64_t sum_sq = 0;
    for (auto [x, l] : f.counts) {
        sum_sq += l * l;
        e.neighbor_pairs += 2 * l * f.at(x + 1);
    }
    e.H = sum_sq - f.total;
    e.Hprime = e.H - 2 * (f.at(0) - 1);
    const long lo = f.counts.begin()->first - 1;
    const long hi = f.counts.rbegin()->first;
    for (long x = lo; x <= hi; ++x) {
        const std::int64_t d = f.at(x) - f.at(x + 1);
        e.G += d * d;
    }
    return e;
}

double energy_attraction(const EnergyState& e, double beta, double gamma) {
    if (!(gamma >= 0.0) || !(beta > gamma))
        throw ConfigError("attraction requires beta > gamma >= 0 (gamma >= beta is the collapsed phase)");
    return (beta - gamma) * static_cast<double>(e.H) + 0.5 * gamma * static_cast<double>(e.G);
}

double energy_attraction(const LatticePath& path, double beta, double gamma) {
    return energy_attraction(energy(path), beta, gamma);
}

double energy_attraction_literal(const EnergyState& e, double beta, double gamma) {
    return beta * static_cast<double>(e.H) - 0.5 * gamma * static_cast<double>(e.neighbor_pairs);
}

bool is_saw(const LatticePath& path) {
    std::vector<long> sorted = path.positions;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

double strip_log_factor(std::int64_t prior_visits, int L) {
    const double width = 2.0 * L + 1.0;
    if (static_cast<double>(prior_visits) >= width) return -std::numeric_limits<double>::infinity();
    return std::log1p(-static_cast<double>(prior_visits) / width);
}

double log_strip_weight(const LocalTimeField& field, int L) {
    if (L < 1) throw ConfigError("strip half-width L must be >= 1");
    double acc = 0.0;
    for (auto [x, l] : field.counts) {
        for (std::int64_t k = 0; k < l; ++k) {
            const double f = strip_log_factor(k, L);
            if (std::isinf(f)) return f;
            acc += f;
        }
    }
    return acc;
}

double strip_weight(const LocalTimeField& field, int L) {
    const double lw = log_strip_weight(field, L);
    return std::isinf(lw) ? 0.0 : std::exp(lw);
}

PathState::PathState(int strip_L) : strip_L_(strip_L), counts_(8, 0), origin_(-4) {
    if (strip_L < 0) throw ConfigError("strip half-width must be non-negative");
    slot(0) = 1;
    energy_.G = 2;  // [0]: (l(-1) - l(0))^2 + (l(0) - l(1))^2
}

void PathState::ensure(long x) {
    const long size = static_cast<long>(counts_.size());
    if (x >= origin_ && x < origin_ + size) return;
    const long lo = std::min(origin_, x - 1);
    const long hi = std::max(origin_ + size, x + 2);
    const long span = hi - lo;
    const long new_size = std::max(span, 2 * size);
    // Center the old window in the new one so growth in either direction is amortized.
    const long pad = (new_size - span) / 2;
    const long new_origin = lo - pad;
    std::vector<std::int64_t> grown(static_cast<std::size_t>(new_size), 0);
    std::copy(counts_.begin(), counts_.end(), grown.begin() + (origin_ - new_origin));
    counts_ = std::move(grown);
    origin_ = new_origin;
}

std::int64_t& PathState::slot(long x) {
    ensure(x);
    return counts_[static_cast<std::size_t>(x - origin_)];
}

std::int64_t PathState::local_time(long x) const {
    const long i = x - origin_;
    if (i < 0 || i >= static_cast<long>(counts_.size())) return 0;
    return counts_[static_cast<std::size_t>(i)];
}

PathState::Delta PathState::preview(long x_new) const {
    const std::int64_t c = local_time(x_new);
    const std::int64_t a = local_time(x_new - 1);
    const std::int64_t b = local_time(x_new + 1);
    Delta d;
    d.dH = 2 * c;
    d.dG = 2 * (2 * c - a - b) + 2;
    d.dNeighbor = 2 * (a + b);
    if (strip_L_ > 0) d.dStripLog = strip_log_factor(c, strip_L_);
    return d;
}

void PathState::extend(int step) {
    const long x = positions_.back() + step;
    const Delta d = preview(x);
    energy_.H += d.dH;
    energy_.Hprime += (x == 0) ? d.dH - 2 : d.dH;
    energy_.G += d.dG;
    energy_.neighbor_pairs += d.dNeighbor;
    if (strip_L_ > 0) {
        strip_log_history_.push_back(strip_log_weight_);
        if (std::isinf(d.dStripLog))
            ++strip_dead_count_;
        else
            strip_log_weight_ += d.dStripLog;
    }
    ++slot(x);
    positions_.push_back(x);
}

void PathState::retract() {
    if (positions_.size() < 2) throw InvariantError("retract on an empty path");
    const long x = positions_.back();
    positions_.pop_back();
    --slot(x);
    const Delta d = preview(x);
    energy_.H -= d.dH;
    energy_.Hprime -= (x == 0) ? d.dH - 2 : d.dH;
    energy_.G -= d.dG;
    energy_.neighbor_pairs -= d.dNeighbor;
    if (strip_L_ > 0) {
        if (std::isinf(d.dStripLog)) --strip_dead_count_;
        strip_log_weight_ = strip_log_history_.back();
        strip_log_history_.pop_back();
    }
}

}  // namespace polymerlab
