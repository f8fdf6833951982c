#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "polymerlab/enumerate.hpp"
#include "polymerlab/stepdist.hpp"

namespace polymerlab {

enum class PieceMode { saw, domb_joyce };

/// A path of N T steps cut into N pieces [(i-1)T, iT] sharing endpoints.
///
/// X_i = exp(mu D_i) [window] [confinement] w_i where D_i is the piece displacement and
/// w_i is 1{piece SAW} (saw) or exp(-beta H(piece)) (domb_joyce).
/// U_i couples pieces i and i+1 through their cross coincidences K_i (pairs other than
/// the shared point): 1{K_i > 0} (saw) or 1 - exp(-2 beta K_i) (domb_joyce).
struct PieceModel {
    PieceModel(StepDistribution d, int T) : dist(std::move(d)), piece_len(T) {}

    StepDistribution dist;
    int piece_len = 1;
    PieceMode mode = PieceMode::saw;
    double beta = 0.0;
    double mu = 0.0;
    /// Window |D_i - window_center| <= window_half_width, in lattice units.
    std::optional<double> window_center;
    double window_half_width = 0.0;
    /// Confinement: piece stays inside [-delta, D_i + delta]. Infinite disables it.
    double delta = std::numeric_limits<double>::infinity();

    void validate() const;
};

struct RenewalSequences {
    std::vector<double> c;   // c_0 .. c_N, c_0 = 1
    std::vector<double> pi;  // pi_0 .. pi_N, pi_0 unused (0), pi_1 = c_1
    double eps = 0.0;        // sqrt(pi_2) / c_1

    int N() const { return static_cast<int>(c.size()) - 1; }
};

RenewalSequences compute_sequences(const PieceModel& model, int N, double leaf_budget = kDefaultLeafBudget);

/// Residuals of c_N = c_1 c_{N-1} + sum_{m=2}^N (-1)^{m-1} pi_m c_{N-m}, entry N-1 for N = 1..N.
std::vector<double> renewal_residuals(const RenewalSequences& s);
double verify_renewal(const RenewalSequences& s);

struct PiBoundRow {
    int m = 0;
    double pi = 0.0;
    double bound = 0.0;  // eps^{m-1} c_1^m
    bool violated = false;
};

/// Rows for 2 <= m <= N.
std::vector<PiBoundRow> verify_pi_bound(const RenewalSequences& s);

struct ContractionResult {
    double eta = 0.0;
    double eps = 0.0;
    bool hypothesis_holds = false;  // eps < eta
    double z = 0.0;
    double tail_bound = 0.0;        // bound on the dropped terms m > N at z
    std::vector<double> A;          // A_0 .. A_N
    std::vector<double> dA;         // |A_N - A_{N-1}|, N = 1..N
    double decay_rate = 0.0;        // fitted q in |A_N - A_{N-1}| ~ K q^N (0 if undetermined)
    bool lower_bound_holds = false; // 1/z >= 1 - 3 eta
};

/// Solves 1 - z = sum_{m=2}^N (-1)^{m-1} pi_m (z/c_1)^m by bisection and forms A_N = c_N (z/c_1)^N.
/// Throws HypothesisError when eps >= eta.
ContractionResult contraction_iteration(const RenewalSequences& s, double eta);

}  // namespace polymerlab
