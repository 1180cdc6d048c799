#ifndef FRACBAYES_INFERENCE_HPP_
#define FRACBAYES_INFERENCE_HPP_

#include <span>
#include <vector>

#include "fracbayes/data.hpp"
#include "fracbayes/sir.hpp"

namespace fracbayes {

struct CredibleInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;

    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
    double width() const noexcept { return hi - lo; }
};

// Order-statistic quantile with linear interpolation between closest ranks
// (index h = (n-1)q, the common type-7 convention).
double quantile(std::span<const double> values, double q);

// Same, but `values` must already be sorted ascending.
double quantile_sorted(std::span<const double> sorted_values, double q);

// Central interval between the (1-level)/2 and 1-(1-level)/2 quantiles.
CredibleInterval credible_interval(std::span<const double> samples, double level = 0.95);

// Posterior predictive draws: for each posterior sample theta_j and each
// point, draws_per_sample values mu(x,t;alpha_j) * exp(sigma_j * z).
// Returns one vector of n_s * draws_per_sample values per point, ordered by
// (sample, draw); the (sample, point, draw) RNG indexing makes the result
// independent of evaluation order.
std::vector<std::vector<double>> posterior_predictive(const PosteriorSampleSet& samples,
                                                      const std::vector<EvalPoint>& points,
                                                      int draws_per_sample, std::uint64_t seed,
                                                      const SeriesConfig& cfg = {});

struct ProfilePoint {
    double coord = 0.0;
    double q025 = 0.0;
    double q50 = 0.0;
    double q975 = 0.0;
};

// Quantile curves of the posterior predictive along one grid axis while the
// other coordinate is held fixed.
struct PredictiveProfile {
    char fixed_label = 'x';  // 'x' or 't'
    double fixed_value = 0.0;
    std::vector<ProfilePoint> points;
};

std::vector<PredictiveProfile> predictive_profiles(const PosteriorSampleSet& samples,
                                                   const GridSpec& grid,
                                                   const std::vector<double>& slice_values,
                                                   char fixed_label, int draws_per_sample,
                                                   std::uint64_t seed,
                                                   const SeriesConfig& cfg = {});

}  // namespace fracbayes

#endif  // FRACBAYES_INFERENCE_HPP_
