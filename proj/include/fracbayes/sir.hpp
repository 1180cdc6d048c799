#ifndef FRACBAYES_SIR_HPP_
#define FRACBAYES_SIR_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "fracbayes/bayes.hpp"

namespace fracbayes {

enum class ProposalKind { Prior, UniformBox, AdaptivePilot };

struct ProposalBox {
    double alpha_lo = 0.0;
    double alpha_hi = 1.0;
    double sigma2_lo = 0.0;
    double sigma2_hi = 1.0;
};

// Candidate (proposal) distribution p_c.
//   Prior         draws straight from Beta x chi-square.
//   UniformBox    uniform over a rectangle in (alpha, sigma2).
//   AdaptivePilot fits a bivariate normal in (logit alpha, ln sigma2) from
//                 tempered pilot rounds and inflates its covariance; the
//                 default, and the only one that keeps weights non-degenerate
//                 once the posterior is much tighter than the prior.
struct ProposalSpec {
    ProposalKind kind = ProposalKind::AdaptivePilot;
    std::optional<ProposalBox> box;
    int pilot_size = 2000;
    double inflation = 2.0;

    void validate() const;
};

struct SirConfig {
    int n_c = 10000;  // candidates
    int n_s = 1000;   // resamples
    std::uint64_t seed = 0;
    ProposalSpec proposal;

    void validate() const;
};

struct SirDiagnostics {
    double unique_fraction = 0.0;  // distinct resampled candidates / n_s
    double ess = 0.0;              // 1 / sum(w*^2), in (0, n_c]
    double max_weight = 0.0;       // largest normalized weight
    int n_finite_weights = 0;
    int pilot_stages = 0;  // tempering rounds used by AdaptivePilot (0 otherwise)
};

struct Candidate {
    Theta theta;
    double log_proposal_density = 0.0;
};

struct PosteriorSampleSet {
    std::vector<Theta> samples;        // length n_s
    std::vector<int> candidate_index;  // which candidate each sample came from
    SirDiagnostics diagnostics;
};

// Step 1: n_c candidates with their log proposal densities.  The dataset is
// consulted only by AdaptivePilot (for the pilot weights).
std::vector<Candidate> draw_candidates(const SirConfig& cfg, const PriorSpec& prior,
                                       const Dataset& dataset, const SeriesConfig& series = {});

// Step 2: log w_i = log posterior kernel - log proposal density; candidates
// outside the support get -inf.
std::vector<double> compute_log_weights(const std::vector<Candidate>& candidates,
                                        const Dataset& dataset, const PriorSpec& prior,
                                        const SeriesConfig& series = {});

// Step 3: normalized weights via log-sum-exp; shift-invariant, sums to 1.
std::vector<double> normalize_weights(const std::vector<double>& log_weights);

// Steps 4-5: multinomial resampling with replacement.
PosteriorSampleSet resample(const std::vector<Candidate>& candidates,
                            const std::vector<double>& weights, int n_s, std::uint64_t seed);

// The full sampler; deterministic given cfg.seed.
PosteriorSampleSet run_sir(const Dataset& dataset, const PriorSpec& prior, const SirConfig& cfg,
                           const SeriesConfig& series = {});

}  // namespace fracbayes

#endif  // FRACBAYES_SIR_HPP_
