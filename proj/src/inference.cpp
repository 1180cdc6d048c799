#include "fracbayes/inference.hpp"

#include <algorithm>
#include <cmath>

#include "fracbayes/parallel.hpp"
#include "fracbayes/rng.hpp"

namespace fracbayes {

namespace {
constexpr std::uint64_t kPredictTag = 0xB1;
}

double quantile_sorted(std::span<const double> sorted_values, double q) {
    if (sorted_values.empty()) throw ValidationError("quantile of empty list");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = static_cast<double>(n - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

double quantile(std::span<const double> values, double q) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, q);
}

CredibleInterval credible_interval(std::span<const double> samples, double level) {
    if (!(level >= 0.0 && level < 1.0))
        throw DomainError("credible interval level must lie in [0, 1)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double tail = 0.5 * (1.0 - level);
    return CredibleInterval{quantile_sorted(sorted, tail), quantile_sorted(sorted, 1.0 - tail),
                            level};
}

std::vector<std::vector<double>> posterior_predictive(const PosteriorSampleSet& samples,
                                                      const std::vector<EvalPoint>& points,
                                                      int draws_per_sample, std::uint64_t seed,
                                                      const SeriesConfig& cfg) {
    if (samples.samples.empty()) throw ValidationError("posterior_predictive needs samples");
    if (points.empty()) throw ValidationError("posterior_predictive needs points");
    if (draws_per_sample < 1) throw ValidationError("draws_per_sample must be >= 1");
    for (const EvalPoint& p : points) p.validate();

    const std::size_t n_s = samples.samples.size();
    const std::size_t n_p = points.size();
    const std::size_t d = static_cast<std::size_t>(draws_per_sample);

    // Distinct times, shared across samples.
    std::vector<double> t_unique;
    std::vector<std::size_t> t_index(n_p);
    for (std::size_t k = 0; k < n_p; ++k) {
        const auto it = std::find(t_unique.begin(), t_unique.end(), points[k].t);
        if (it == t_unique.end()) {
            t_index[k] = t_unique.size();
            t_unique.push_back(points[k].t);
        } else {
            t_index[k] = static_cast<std::size_t>(it - t_unique.begin());
        }
    }

    std::vector<std::vector<double>> values(n_p, std::vector<double>(n_s * d));
    parallel_for(n_s, [&](std::size_t j) {
        const Theta& th = samples.samples[j];
        const double sigma = std::sqrt(th.sigma2);
        const std::vector<double> s =
            series_factor_many(FractionalOrder(th.alpha), t_unique, cfg);
        for (std::size_t k = 0; k < n_p; ++k) {
            const double mu = std::exp(-points[k].x) * s[t_index[k]];
            for (std::size_t r = 0; r < d; ++r) {
                CounterRng rng(seed, substream(kPredictTag, j, k, r));
                values[k][j * d + r] = mu * std::exp(sigma * rng.next_normal());
            }
        }
    });
    return values;
}

std::vector<PredictiveProfile> predictive_profiles(const PosteriorSampleSet& samples,
                                                   const GridSpec& grid,
                                                   const std::vector<double>& slice_values,
                                                   char fixed_label, int draws_per_sample,
                                                   std::uint64_t seed, const SeriesConfig& cfg) {
    if (fixed_label != 'x' && fixed_label != 't')
        throw ValidationError("profile fixed_label must be 'x' or 't'");
    grid.validate();

    // Free-axis coordinates from the grid.
    const int n_free = fixed_label == 'x' ? grid.n_t : grid.n_x;
    const double lo = fixed_label == 'x' ? grid.t_min : grid.x_min;
    const double hi = fixed_label == 'x' ? grid.t_max : grid.x_max;
    std::vector<double> coords(static_cast<std::size_t>(n_free));
    for (int i = 0; i < n_free; ++i)
        coords[static_cast<std::size_t>(i)] =
            n_free == 1 ? lo : lo + (hi - lo) / static_cast<double>(n_free - 1) * i;
    if (n_free > 1) coords.back() = hi;

    std::vector<PredictiveProfile> profiles;
    profiles.reserve(slice_values.size());
    for (std::size_t s = 0; s < slice_values.size(); ++s) {
        const double v = slice_values[s];
        const double axis_lo = fixed_label == 'x' ? grid.x_min : grid.t_min;
        const double axis_hi = fixed_label == 'x' ? grid.x_max : grid.t_max;
        if (!(v >= axis_lo && v <= axis_hi))
            throw ValidationError("profile slice value outside grid range");

        std::vector<EvalPoint> points;
        points.reserve(coords.size());
        for (double c : coords)
            points.push_back(fixed_label == 'x' ? EvalPoint{v, c} : EvalPoint{c, v});

        const auto values = posterior_predictive(
            samples, points, draws_per_sample,
            substream(seed, static_cast<std::uint64_t>(fixed_label), s), cfg);

        PredictiveProfile profile;
        profile.fixed_label = fixed_label;
        profile.fixed_value = v;
        profile.points.reserve(points.size());
        for (std::size_t k = 0; k < points.size(); ++k) {
            std::vector<double> sorted = values[k];
            std::sort(sorted.begin(), sorted.end());
            profile.points.push_back(ProfilePoint{coords[k], quantile_sorted(sorted, 0.025),
                                                  quantile_sorted(sorted, 0.5),
                                                  quantile_sorted(sorted, 0.975)});
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

}  // namespace fracbayes
