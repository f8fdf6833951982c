#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polymerlab/model.hpp"
#include "polymerlab/stepdist.hpp"

namespace polymerlab {

struct Sample {
    long endpoint = 0;
    double log_weight = 0.0;
    std::int64_t H = 0;  // intersection local time of the sampled path
};

/// Weighted paths produced by one replica (one RNG stream).
struct WeightedEnsemble {
    std::vector<Sample> samples;
    /// Draws for importance sampling, tours for PERM; Z is estimated by total weight / draws.
    std::uint64_t draws = 0;
    std::uint64_t zero_weight_draws = 0;  // tours with no survivors, or zero-weight samples
    std::uint64_t seed = 0;
    std::uint32_t replica_id = 0;
    std::uint64_t chains_grown = 0;  // PERM only: chain steps attempted

    double log_total_weight() const;
    /// log of (sum of weights) / draws.
    double log_Z() const;
    double effective_sample_size() const;
};

struct PermParams {
    double c_low = 0.2;    // prune below c_low times the running mean weight at that depth
    double c_high = 5.0;   // enrich above c_high times the running mean weight
    bool pruning = true;
    bool enrichment = true;
    /// Enrichment pauses within a tour once this many chains were started in it.
    std::uint64_t max_chains_per_tour = 1'000'000;
};

/// Free-walk draws reweighted by the model weight (finite-beta models only).
WeightedEnsemble sample_importance_replica(const StepDistribution& dist, int n, const ModelSpec& model,
                                           std::uint64_t samples, std::uint64_t seed, std::uint32_t replica);
std::vector<WeightedEnsemble> sample_importance(const StepDistribution& dist, int n, const ModelSpec& model,
                                                std::uint64_t samples_per_replica, std::uint32_t replicas,
                                                std::uint64_t seed);

/// Pruned-enriched Rosenbluth growth, depth first.
WeightedEnsemble sample_perm_replica(const StepDistribution& dist, int n, const ModelSpec& model,
                                     std::uint64_t tours, std::uint64_t seed, std::uint32_t replica,
                                     const PermParams& params = {});
std::vector<WeightedEnsemble> sample_perm(const StepDistribution& dist, int n, const ModelSpec& model,
                                          std::uint64_t tours_per_replica, std::uint32_t replicas,
                                          std::uint64_t seed, const PermParams& params = {});

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
};

/// Self-normalized endpoint statistics with jackknife-over-replica errors.
struct CltEstimate {
    int n = 0;
    std::uint32_t replicas = 0;
    Estimate theta;        // E_Q|S_n| / n
    Estimate r;            // -(1/n) log Z
    Estimate sigma_star;   // sd_Q(|S_n|) / sqrt(n)
    Estimate mean_abs;     // E_Q|S_n|
    Estimate mean;         // E_Q S_n
    Estimate log_Z;        // log Z
    Estimate Z;            // Z (may underflow for long chains)
    double ess = 0.0;
    std::uint64_t samples = 0;
    std::vector<std::string> warnings;
};

CltEstimate estimate_clt(std::span<const WeightedEnsemble> replicas, int n);

}  // namespace polymerlab
