#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace polymerlab {

/// Walk trajectory S_0 = 0, S_1, ..., S_n.
struct LatticePath {
    std::vector<long> positions{0};

    int n() const { return static_cast<int>(positions.size()) - 1; }
    long endpoint() const { return positions.back(); }
    static LatticePath from_steps(std::span<const int> steps);
};

/// Visit counts l_n(x) = #{0 <= i <= n : S_i = x}.
struct LocalTimeField {
    std::map<long, std::int64_t> counts;
    std::int64_t total = 0;  // n + 1

    std::int64_t at(long x) const;
};

/// Integer interaction counts of a path. Self-intersections are counted over
/// ordered time pairs i != j, so each unordered coincidence contributes 2.
struct EnergyState {
    std::int64_t H = 0;               // sum_{i!=j} 1{S_i = S_j} = sum l^2 - (n+1)
    std::int64_t Hprime = 0;          // H - 2 (l(0) - 1)
    std::int64_t G = 0;               // sum_x (l(x) - l(x+1))^2
    std::int64_t neighbor_pairs = 0;  // sum_{i!=j} 1{|S_i - S_j| = 1}

    bool operator==(const EnergyState&) const = default;
};

LocalTimeField local_times(const LatticePath& path);
EnergyState energy(const LatticePath& path);

/// (beta - gamma) H + (gamma / 2) G. The literal pair-count Hamiltonian
/// beta H - (gamma / 2) neighbor_pairs equals this minus gamma (n + 1).
double energy_attraction(const EnergyState& e, double beta, double gamma);
double energy_attraction(const LatticePath& path, double beta, double gamma);
double energy_attraction_literal(const EnergyState& e, double beta, double gamma);

bool is_saw(const LatticePath& path);

/// Probability that i.i.d. uniform heights on {-L..L} separate every revisit:
/// prod_x prod_{k < l(x)} (1 - k / (2L + 1)).
double strip_weight(const LocalTimeField& field, int L);
double log_strip_weight(const LocalTimeField& field, int L);

/// Incrementally maintained path with its local times and interaction counts.
///
/// Local times live in a dense window that grows in both directions, so extend()
/// and retract() are O(1) amortized. retract() undoes the last extend() exactly,
/// which the depth-first enumerators and PERM rely on.
class PathState {
public:
    /// strip_L > 0 also tracks log of strip_weight.
    explicit PathState(int strip_L = 0);

    int n() const { return static_cast<int>(positions_.size()) - 1; }
    long position() const { return positions_.back(); }
    const std::vector<long>& positions() const { return positions_; }
    const EnergyState& energy() const { return energy_; }
    std::int64_t local_time(long x) const;
    int strip_L() const { return strip_L_; }
    double strip_log_weight() const {
        return strip_dead() ? -std::numeric_limits<double>::infinity() : strip_log_weight_;
    }
    /// True once some site was visited more than 2L + 1 times in strip mode.
    bool strip_dead() const { return strip_dead_count_ > 0; }

    struct Delta {
        std::int64_t dH = 0;
        std::int64_t dG = 0;
        std::int64_t dNeighbor = 0;
        double dStripLog = 0.0;  // -inf when the strip weight drops to zero
    };

    /// Change the next step to x_new would cause, without applying it.
    Delta preview(long x_new) const;

    void extend(int step);
    void retract();

    LatticePath path() const { return LatticePath{positions_}; }

private:
    std::int64_t& slot(long x);
    void ensure(long x);

    int strip_L_;
    std::vector<long> positions_{0};
    std::vector<std::int64_t> counts_;
    long origin_ = 0;  // site stored at counts_[0]
    EnergyState energy_;
    double strip_log_weight_ = 0.0;
    std::vector<double> strip_log_history_;
    int strip_dead_count_ = 0;
};

/// log(1 - c / (2L + 1)), -inf when c >= 2L + 1.
double strip_log_factor(std::int64_t prior_visits, int L);

}  // namespace polymerlab
