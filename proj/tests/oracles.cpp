#include "oracles.hpp"

#include <cmath>

namespace oracles {

using namespace fracbayes;

long double series_brute_force(double alpha, double t) {
    if (t == 0.0L) return 2.0L;
    const long double a = alpha;
    const long double lnt = std::log(static_cast<long double>(t));
    long double sum = 2.0L;
    for (int k = 1; k < 100000; ++k) {
        const long double term = 2.0L * std::exp(a * k * lnt - std::lgamma(a * k + 1.0L));
        sum += term;
        if (k > 30 && term < 1e-18L * sum) break;
    }
    return sum;
}

long double log_likelihood_naive(const Theta& theta, const Dataset& data,
                                 const SeriesConfig& cfg) {
    const long double s2 = theta.sigma2;
    long double total = 0.0L;
    for (const Observation& o : data.observations) {
        const double mu = evaluate_pressure(EvalPoint{o.x, o.t}, FractionalOrder(theta.alpha), cfg);
        const long double r =
            std::log(static_cast<long double>(o.p_obs)) - std::log(static_cast<long double>(mu));
        total += -r * r / (2.0L * s2) - std::log(static_cast<long double>(o.p_obs)) -
                 0.5L * std::log(s2) - 0.5L * std::log(2.0L * 3.14159265358979323846264338328L);
    }
    return total;
}

QuadratureSummary posterior_quadrature(const Dataset& data, const PriorSpec& prior,
                                       double alpha_center, double alpha_half_width,
                                       double sigma2_center, double sigma2_half_width, int n,
                                       const SeriesConfig& cfg) {
    const LikelihoodCache cache(data);
    const double a_lo = std::max(1e-6, alpha_center - alpha_half_width);
    const double a_hi = std::min(1.0 - 1e-9, alpha_center + alpha_half_width);
    const double s_lo = std::max(1e-12, sigma2_center - sigma2_half_width);
    const double s_hi = sigma2_center + sigma2_half_width;
    const double da = (a_hi - a_lo) / n;
    const double ds = (s_hi - s_lo) / n;

    // Midpoint rule; constant cell area cancels in the normalization.
    std::vector<std::vector<double>> lp(n, std::vector<double>(n));
    double lp_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double a = a_lo + (i + 0.5) * da;
        for (int j = 0; j < n; ++j) {
            const double s2 = s_lo + (j + 0.5) * ds;
            lp[i][j] = log_unnorm_posterior(Theta{a, s2}, cache, prior, cfg);
            lp_max = std::max(lp_max, lp[i][j]);
        }
    }
    long double z = 0.0L, ma = 0.0L, ms = 0.0L;
    std::vector<long double> marginal_alpha(n, 0.0L);
    for (int i = 0; i < n; ++i) {
        const double a = a_lo + (i + 0.5) * da;
        for (int j = 0; j < n; ++j) {
            const double s2 = s_lo + (j + 0.5) * ds;
            const long double w = std::exp(static_cast<long double>(lp[i][j] - lp_max));
            z += w;
            ma += w * a;
            ms += w * s2;
            marginal_alpha[i] += w;
        }
    }
    QuadratureSummary out;
    out.mean_alpha = static_cast<double>(ma / z);
    out.mean_sigma2 = static_cast<double>(ms / z);

    // Interval endpoints by linear interpolation of the cumulative marginal.
    long double acc = 0.0L;
    double q025 = a_lo, q975 = a_hi;
    bool got025 = false;
    for (int i = 0; i < n; ++i) {
        const long double prev = acc;
        acc += marginal_alpha[i] / z;
        const double a = a_lo + (i + 0.5) * da;
        if (!got025 && acc >= 0.025L) {
            const double frac = static_cast<double>((0.025L - prev) / (acc - prev));
            q025 = a - 0.5 * da + frac * da;
            got025 = true;
        }
        if (acc >= 0.975L) {
            const double frac = static_cast<double>((0.975L - prev) / (acc - prev));
            q975 = a - 0.5 * da + frac * da;
            break;
        }
    }
    out.q025_alpha = q025;
    out.q975_alpha = q975;
    return out;
}

ImportanceEstimate weighted_alpha_mean(const std::vector<Theta>& thetas,
                                       const std::vector<double>& weights) {
    ImportanceEstimate e;
    for (std::size_t i = 0; i < thetas.size(); ++i) e.mean += weights[i] * thetas[i].alpha;
    double var = 0.0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double d = thetas[i].alpha - e.mean;
        var += weights[i] * weights[i] * d * d;
    }
    e.se = std::sqrt(var);
    return e;
}

}  // namespace oracles
