#include "fracbayes/bayes.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace fracbayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLogTwoPi = 0.91893853320467274178;

// coef * ln(v) with the convention 0 * ln(0) = 0, so a Beta(.,1) prior stays
// finite at the alpha = 1 boundary.
inline double kernel_term(double coef, double v) {
    if (coef == 0.0) return 0.0;
    return coef * std::log(v);
}

// Compensated (Kahan) accumulator; fixed summation order keeps results
// bitwise reproducible and the compensation keeps the separability shortcut
// within 1e-12 of a naive per-observation sum.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double v) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double log_prior(const Theta& theta, const PriorSpec& prior) noexcept {
    const double a = theta.alpha;
    const double s2 = theta.sigma2;
    if (!(a > 0.0) || !(a <= 1.0) || !(s2 > 0.0)) return kNegInf;
    if (a == 1.0 && prior.beta_star != 1.0) return kNegInf;
    double lp = kernel_term(prior.alpha_star - 1.0, a) + kernel_term(prior.beta_star - 1.0, 1.0 - a);
    if (prior.include_sigma2_kernel)
        lp += kernel_term(0.5 * prior.df - 1.0, s2) - 0.5 * s2;
    return lp;
}

LikelihoodCache::LikelihoodCache(const Dataset& dataset) {
    dataset.validate();
    const std::size_t n = dataset.observations.size();
    x_.reserve(n);
    ln_p_.reserve(n);
    t_index_.reserve(n);
    std::unordered_map<double, int> seen;
    KahanSum sum_lnp;
    for (const Observation& o : dataset.observations) {
        x_.push_back(o.x);
        const double lnp = std::log(o.p_obs);
        ln_p_.push_back(lnp);
        sum_lnp.add(lnp);
        auto [it, inserted] = seen.emplace(o.t, static_cast<int>(t_unique_.size()));
        if (inserted) t_unique_.push_back(o.t);
        t_index_.push_back(it->second);
    }
    sum_ln_p_ = sum_lnp.sum;
}

double LikelihoodCache::log_likelihood(const Theta& theta, const SeriesConfig& cfg) const {
    const double s2 = theta.sigma2;
    if (!(s2 > 0.0) || !(theta.alpha > 0.0) || !(theta.alpha <= 1.0)) return kNegInf;
    const std::vector<double> s = series_factor_many(FractionalOrder(theta.alpha), t_unique_, cfg);
    std::vector<double> ln_s(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) ln_s[j] = std::log(s[j]);

    KahanSum ssr;
    for (std::size_t i = 0; i < x_.size(); ++i) {
        const double r = ln_p_[i] + x_[i] - ln_s[static_cast<std::size_t>(t_index_[i])];
        ssr.add(r * r);
    }
    const double n = static_cast<double>(x_.size());
    return -ssr.sum / (2.0 * s2) - sum_ln_p_ - n * (0.5 * std::log(s2) + kHalfLogTwoPi);
}

double log_likelihood(const Theta& theta, const Dataset& dataset, const SeriesConfig& cfg) {
    return LikelihoodCache(dataset).log_likelihood(theta, cfg);
}

double log_unnorm_posterior(const Theta& theta, const LikelihoodCache& cache,
                            const PriorSpec& prior, const SeriesConfig& cfg) {
    const double lp = log_prior(theta, prior);
    if (lp == kNegInf) return kNegInf;
    const double ll = cache.log_likelihood(theta, cfg);
    if (ll == kNegInf) return kNegInf;
    return lp + ll;
}

double log_unnorm_posterior(const Theta& theta, const Dataset& dataset, const PriorSpec& prior,
                            const SeriesConfig& cfg) {
    return log_unnorm_posterior(theta, LikelihoodCache(dataset), prior, cfg);
}

}  // namespace fracbayes
