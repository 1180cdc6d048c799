#ifndef FRACBAYES_BAYES_HPP_
#define FRACBAYES_BAYES_HPP_

#include <vector>

#include "fracbayes/data.hpp"
#include "fracbayes/solution.hpp"

namespace fracbayes {

// Parameter point theta = (alpha, sigma2); sigma2 is the variance of the
// log-scale observation noise.  Kept as a plain aggregate so samplers can
// hold boundary values; support checks live in log_prior.
struct Theta {
    double alpha = 0.5;
    double sigma2 = 1.0;
};

// Beta(alpha_star, beta_star) prior on alpha and chi-square(df) prior on
// sigma2.  include_sigma2_kernel switches the chi-square kernel off, which
// leaves an improper flat prior on sigma2.
struct PriorSpec {
    double alpha_star = 3.0;
    double beta_star = 3.0;
    double df = 1.0;
    bool include_sigma2_kernel = true;

    void validate() const {
        if (!(alpha_star > 0.0)) throw ValidationError("prior.alpha_star must be > 0");
        if (!(beta_star > 0.0)) throw ValidationError("prior.beta_star must be > 0");
        if (!(df > 0.0)) throw ValidationError("prior.df must be > 0");
    }
};

// Log prior kernel (normalizing constants omitted; they cancel in the
// importance weights).  Returns -inf outside the support rather than
// throwing, so proposal overdraw degrades to zero weight.
double log_prior(const Theta& theta, const PriorSpec& prior) noexcept;

// Precomputed view of a dataset for repeated likelihood evaluation: log
// pressures, the distinct times, and each observation's time index.  The
// series is evaluated once per distinct t and shared across x.
class LikelihoodCache {
public:
    explicit LikelihoodCache(const Dataset& dataset);

    double log_likelihood(const Theta& theta, const SeriesConfig& cfg = {}) const;

    std::size_t size() const noexcept { return x_.size(); }
    const std::vector<double>& unique_times() const noexcept { return t_unique_; }

private:
    std::vector<double> x_;
    std::vector<double> ln_p_;
    std::vector<int> t_index_;
    std::vector<double> t_unique_;
    double sum_ln_p_ = 0.0;
};

// LogNormal log-likelihood of the dataset under theta.
double log_likelihood(const Theta& theta, const Dataset& dataset, const SeriesConfig& cfg = {});

// log_prior + log_likelihood; -inf outside the support.
double log_unnorm_posterior(const Theta& theta, const Dataset& dataset, const PriorSpec& prior,
                            const SeriesConfig& cfg = {});
double log_unnorm_posterior(const Theta& theta, const LikelihoodCache& cache,
                            const PriorSpec& prior, const SeriesConfig& cfg = {});

}  // namespace fracbayes

#endif  // FRACBAYES_BAYES_HPP_
