#include "fracbayes/solution.hpp"

#include <cmath>

namespace fracbayes {

namespace {

// Lanczos coefficients for g = 607/128, n = 15 (Godfrey's set).
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosCoef[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

constexpr double kSqrtTwoPi = 2.5066282746310005024;

// One truncation pass sharing a caller-owned lnGamma table; lg[k] holds
// lnGamma(alpha*k + 1) and is grown on demand so both the scalar and the
// batched entry points run the exact same arithmetic.
double series_sum(double alpha, double t, const SeriesConfig& cfg, std::vector<double>& lg) {
    if (t == 0.0) return 2.0;
    const double ln_t = std::log(t);
    double sum = 2.0;  // k = 0 term
    for (int k = 1; k <= cfg.k_max; ++k) {
        if (static_cast<std::size_t>(k) >= lg.size()) {
            std::size_t next = lg.empty() ? 64 : lg.size() * 2;
            if (next <= static_cast<std::size_t>(k)) next = static_cast<std::size_t>(k) + 1;
            const std::size_t old = lg.size();
            lg.resize(next);
            for (std::size_t j = old; j < next; ++j)
                lg[j] = log_gamma(alpha * static_cast<double>(j) + 1.0);
        }
        const double term = 2.0 * std::exp(alpha * static_cast<double>(k) * ln_t - lg[k]);
        sum += term;
        if (k >= cfg.k_min && term < cfg.rel_tol * sum) return sum;
    }
    throw ConvergenceError("series did not converge", sum,
                           2.0 * std::exp(alpha * static_cast<double>(cfg.k_max) * ln_t -
                                          log_gamma(alpha * static_cast<double>(cfg.k_max) + 1.0)),
                           cfg.k_max);
}

}  // namespace

double log_gamma(double z) {
    if (!(z > 0.0)) throw DomainError("log_gamma requires z > 0, got " + std::to_string(z));
    // Shifted form lnGamma(z) = lnGamma(z+1) - ln z; holds on all of (0, inf).
    double series = kLanczosCoef[0];
    for (int i = 1; i < 15; ++i) series += kLanczosCoef[i] / (z + static_cast<double>(i));
    const double base = z + kLanczosG + 0.5;
    return (z + 0.5) * std::log(base) - base + std::log(kSqrtTwoPi * series / z);
}

double series_factor(FractionalOrder alpha, double t, const SeriesConfig& cfg) {
    cfg.validate();
    if (!(t >= 0.0)) throw DomainError("series_factor requires t >= 0");
    std::vector<double> lg;
    return series_sum(alpha.value(), t, cfg, lg);
}

std::vector<double> series_factor_many(FractionalOrder alpha, std::span<const double> ts,
                                       const SeriesConfig& cfg) {
    cfg.validate();
    std::vector<double> lg;
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        if (!(t >= 0.0)) throw DomainError("series_factor requires t >= 0");
        out.push_back(series_sum(alpha.value(), t, cfg, lg));
    }
    return out;
}

double evaluate_pressure(const EvalPoint& point, FractionalOrder alpha, const SeriesConfig& cfg) {
    point.validate();
    return std::exp(-point.x) * series_factor(alpha, point.t, cfg);
}

std::vector<std::vector<double>> evaluate_surface(std::span<const double> xs,
                                                  std::span<const double> ts,
                                                  FractionalOrder alpha, const SeriesConfig& cfg) {
    if (xs.empty() || ts.empty()) throw ValidationError("evaluate_surface needs nonempty axes");
    for (double x : xs)
        if (!(x >= 0.0)) throw ValidationError("evaluate_surface needs x >= 0");
    const std::vector<double> s = series_factor_many(alpha, ts, cfg);
    std::vector<std::vector<double>> grid(xs.size(), std::vector<double>(ts.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ex = std::exp(-xs[i]);
        for (std::size_t j = 0; j < ts.size(); ++j) grid[i][j] = ex * s[j];
    }
    return grid;
}

}  // namespace fracbayes
