#include "fracbayes/rng.hpp"

#include <cmath>

namespace fracbayes {

double CounterRng::next_normal() noexcept {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double CounterRng::next_gamma(double shape) noexcept {
    if (shape < 1.0) {
        // Boost by one and scale back with a uniform power.
        const double u = next_uniform();
        return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = next_normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = next_uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double CounterRng::next_beta(double a, double b) noexcept {
    const double x = next_gamma(a);
    const double y = next_gamma(b);
    return x / (x + y);
}

}  // namespace fracbayes
