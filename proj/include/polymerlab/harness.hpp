#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polymerlab/montecarlo.hpp"
#include "polymerlab/stepdist.hpp"

namespace polymerlab {

enum class Experiment { beta, sigma, coupled, attraction, strip, flory };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

struct SweepOptions {
    std::uint32_t replicas = 32;
    std::uint64_t tours = 500;  // PERM tours per replica
    std::uint64_t seed = 1;
    PermParams perm;
    /// n = ceil(n_coefficient * coupling^{-2/3}) for beta-like sweeps,
    /// ceil(n_coefficient * sigma^{2/3}) for the sigma sweep.
    double n_coefficient = 200.0;
    /// Rows below this effective sample size are kept but left out of fits.
    double ess_threshold = 100.0;
    bool anchor = true;
    /// Accept schedules outside the theorem's hypotheses (negative controls).
    bool allow_invalid_schedule = false;
};

struct SweepRow {
    double param = 0.0;  // the swept value
    double beta = 0.0;   // infinity for SAW
    double gamma = 0.0;
    int L = 0;           // step range (sigma sweep) or strip half-width
    double sigma = 0.0;
    int n = 0;
    CltEstimate est;
    double scaled_theta = 0.0;
    double scaled_theta_se = 0.0;
    double scaled_r = 0.0;
    double scaled_r_se = 0.0;
    double extra = 0.0;  // attraction: E(G_n)/n; flory: E|S_n|
    std::vector<std::string> warnings;
};

struct FitResult {
    double slope = 0.0;
    double slope_se = 0.0;
    double amplitude = 0.0;
    double amplitude_se = 0.0;
    int points = 0;
};

/// MC estimate at a small instance compared with exact enumeration.
struct AnchorCheck {
    int n = 0;
    double param = 0.0;
    double mc = 0.0;
    double mc_se = 0.0;
    double exact = 0.0;
    bool within_3se = false;
};

struct SweepReport {
    Experiment experiment = Experiment::beta;
    std::string dist_description;
    std::vector<SweepRow> rows;
    std::optional<FitResult> theta_fit;
    std::optional<FitResult> r_fit;
    double theta_ref_slope = 0.0;
    double theta_ref_amplitude = 0.0;
    double r_ref_slope = 0.0;
    double r_ref_amplitude = 0.0;
    std::optional<AnchorCheck> anchor;
    std::vector<std::string> warnings;
};

/// Weighted least squares of log y on log x with weights (y / y_se)^2. The amplitude is
/// y / x^slope at the smallest x. Unweighted when any stderr is zero.
FitResult fit_scaling(std::span<const double> x, std::span<const double> y, std::span<const double> y_se);

int n_rule(double coefficient, double coupling);

SweepReport sweep_beta(const StepDistribution& dist, std::span<const double> betas, const SweepOptions& opt);
SweepReport sweep_sigma(Family family, std::span<const int> Ls, const SweepOptions& opt);

enum class Schedule { beta, strip };

/// beta_n = n^{-a} (valid 0 < a < 3/2) or L_n = ceil(n^a) (valid 0 < a < 3/2).
SweepReport sweep_coupled(const StepDistribution& dist, Schedule schedule, double exponent,
                          std::span<const int> ns, const SweepOptions& opt);

/// Sweeps btilde = beta - gamma with gamma = btilde^{gamma_exponent}; valid when the exponent exceeds 2/3.
SweepReport sweep_attraction(const StepDistribution& dist, std::span<const double> btildes, double gamma_exponent,
                             const SweepOptions& opt);

SweepReport sweep_strip(const StepDistribution& dist, std::span<const int> Ls, const SweepOptions& opt);

/// Strip walks with L_n = ceil(n^{3/4}); fits E|S_n| against n.
SweepReport sweep_flory(std::span<const int> ns, const SweepOptions& opt);

void write_csv(std::ostream& os, const SweepReport& report);
/// JSON with rows, fits, references and anchor.
std::string report_json(const SweepReport& report);

}  // namespace polymerlab
