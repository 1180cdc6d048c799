#ifndef FRACBAYES_SOLUTION_HPP_
#define FRACBAYES_SOLUTION_HPP_

#include <span>
#include <vector>

#include "fracbayes/errors.hpp"

namespace fracbayes {

// Fractional order of the time derivative, constrained to (0, 1].  The
// physical model lives on (0, 1); the value 1 is admitted as the classical
// limit where the time factor collapses to 2*exp(t).
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0) || !(alpha <= 1.0))
            throw DomainError("fractional order must lie in (0, 1], got " +
                              std::to_string(alpha));
    }
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

// Truncation control for the Mittag-Leffler-type series.  k_min guards
// against premature exit while early terms are still growing (t > 1).
struct SeriesConfig {
    double rel_tol = 1e-14;
    int k_min = 20;
    int k_max = 10000;

    void validate() const {
        if (!(rel_tol > 0.0)) throw ValidationError("series.rel_tol must be > 0");
        if (!(k_min > 0 && k_min < k_max))
            throw ValidationError("series requires 0 < k_min < k_max");
    }
};

struct EvalPoint {
    double x = 0.0;  // space, dimensionless, >= 0
    double t = 0.0;  // time, dimensionless, >= 0

    void validate() const {
        if (!(x >= 0.0)) throw ValidationError("evaluation point needs x >= 0");
        if (!(t >= 0.0)) throw ValidationError("evaluation point needs t >= 0");
    }
};

// ln Gamma(z) for z > 0 via a 15-term Lanczos approximation (g = 607/128),
// relative error well under 1e-12 across the working range.
double log_gamma(double z);

// Time factor S(t; alpha) = sum_{k>=0} 2 t^(alpha k) / Gamma(alpha k + 1).
// Terms are computed in log space so t^(alpha k) and Gamma(alpha k + 1)
// never overflow individually.  At t = 0 only the k = 0 term survives
// (0^0 = 1) and S = 2.
double series_factor(FractionalOrder alpha, double t, const SeriesConfig& cfg = {});

// S(t; alpha) for several t values sharing one lnGamma(alpha k + 1) table.
// Bit-identical to per-t series_factor calls.
std::vector<double> series_factor_many(FractionalOrder alpha, std::span<const double> ts,
                                       const SeriesConfig& cfg = {});

// Pressure solution p(x,t) = exp(-x) * S(t; alpha); strictly positive.
double evaluate_pressure(const EvalPoint& point, FractionalOrder alpha,
                         const SeriesConfig& cfg = {});

// |xs| x |ts| grid of pressures.  Separable: one series per t, one
// exponential per x; matches pointwise evaluate_pressure exactly.
std::vector<std::vector<double>> evaluate_surface(std::span<const double> xs,
                                                  std::span<const double> ts,
                                                  FractionalOrder alpha,
                                                  const SeriesConfig& cfg = {});

}  // namespace fracbayes

#endif  // FRACBAYES_SOLUTION_HPP_
