#include <doctest.h>

#include <chrono>
#include <cmath>

#include "fracbayes/solution.hpp"
#include "oracles.hpp"

using namespace fracbayes;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("log_gamma matches high-precision references") {
    // Reference values computed with 40-digit arbitrary-precision arithmetic.
    struct Ref {
        double z, value;
    };
    const Ref refs[] = {
        {0.5, 0.5723649429247000870717},  {1.5, -0.1207822376352452223455},
        {2.5, 0.2846828704729191596325},  {3.75, 1.486815578593417055541},
        {10.0, 12.80182748008146961121},  {100.0, 359.134205369575398776},
        {1000.0, 5905.220423209181211826}, {5000.0, 37582.62631568535033175},
        {0.001, 6.907178885383853682512}, {4999.5, 37578.36779409464258806},
        {20.25, 40.08411059791734898397},
    };
    for (const Ref& r : refs) {
        INFO("z = ", r.z);
        CHECK(rel_err(log_gamma(r.z), r.value) < 1e-12);
    }
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("log_gamma agrees with libm across the working range") {
    for (double z = 0.01; z <= 5000.0; z *= 1.37) {
        INFO("z = ", z);
        CHECK(std::abs(log_gamma(z) - std::lgamma(z)) <=
              1e-12 * std::max(1.0, std::abs(std::lgamma(z))));
    }
}

TEST_CASE("log_gamma rejects the nonpositive half-line") {
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-3.2), DomainError);
}

TEST_CASE("series_factor fixed points") {
    CHECK(series_factor(FractionalOrder(0.82), 0.0) == 2.0);
    // alpha = 1 collapses to 2 e^t.
    CHECK(rel_err(series_factor(FractionalOrder(1.0), 1.0), 5.436563656918090470721) < 1e-13);
    // alpha = 1/2: S = 2 e^t erfc(-sqrt(t)).
    CHECK(rel_err(series_factor(FractionalOrder(0.5), 1.0), 10.01796016152456693262) < 1e-13);
}

TEST_CASE("series_factor matches arbitrary-precision partial sums") {
    struct Ref {
        double alpha, t, value;
    };
    const Ref refs[] = {
        {0.82, 0.5, 3.787737771357383260865}, {0.82, 1.0, 6.449000418294062102599},
        {0.82, 1.5, 10.77973223412890886546}, {0.3, 1.2, 20.19258707508124718889},
        {0.1, 1.5, 82.29780898697250483841},  {0.9, 2.0, 16.35578423426705877968},
        {0.5, 2.0, 28.88381639082991848321},  {0.25, 0.75, 14.10285148910852698095},
        {0.82, 10.0, 53723.03790720049639752}, {0.05, 1.5, 163.6201927888110291366},
        {0.999, 1.3, 7.345230633473864185862},
    };
    for (const Ref& r : refs) {
        INFO("alpha = ", r.alpha, ", t = ", r.t);
        CHECK(rel_err(series_factor(FractionalOrder(r.alpha), r.t), r.value) < 1e-12);
    }
}

TEST_CASE("series_factor agrees with the long-double brute-force oracle") {
    const double alphas[] = {0.07, 0.33, 0.5, 0.72, 0.82, 0.95, 1.0};
    const double ts[] = {0.0, 0.01, 0.5, 1.0, 1.5, 2.0};
    for (double a : alphas)
        for (double t : ts) {
            INFO("alpha = ", a, ", t = ", t);
            const double got = series_factor(FractionalOrder(a), t);
            const double want = static_cast<double>(oracles::series_brute_force(a, t));
            CHECK(rel_err(got, want) < 1e-12);
        }
}

TEST_CASE("series_factor half-order identity over t in [0, 2]") {
    for (double t = 0.0; t <= 2.0; t += 0.04) {
        const double want = 2.0 * std::exp(t) * std::erfc(-std::sqrt(t));
        CHECK(rel_err(series_factor(FractionalOrder(0.5), t), want) < 1e-10);
    }
}

TEST_CASE("series_factor reports non-convergence with the partial state") {
    SeriesConfig cfg;
    cfg.k_min = 2;
    cfg.k_max = 5;  // far too few terms for t = 10
    try {
        series_factor(FractionalOrder(0.82), 10.0, cfg);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.partial_sum() > 2.0);
        CHECK(e.last_term() > 0.0);
        CHECK(e.k_max() == 5);
    }
}

TEST_CASE("series config validation") {
    SeriesConfig bad;
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(series_factor(FractionalOrder(0.5), 1.0, bad), ValidationError);
    bad = SeriesConfig{};
    bad.k_min = 50;
    bad.k_max = 50;
    CHECK_THROWS_AS(series_factor(FractionalOrder(0.5), 1.0, bad), ValidationError);
    CHECK_THROWS_AS(FractionalOrder(0.0), DomainError);
    CHECK_THROWS_AS(FractionalOrder(1.2), DomainError);
    CHECK_THROWS_AS(series_factor(FractionalOrder(0.5), -1.0), DomainError);
}

TEST_CASE("evaluate_pressure fixed points") {
    CHECK(evaluate_pressure(EvalPoint{0.0, 0.0}, FractionalOrder(0.37)) == 2.0);
    CHECK(rel_err(evaluate_pressure(EvalPoint{1.0, 1.0}, FractionalOrder(1.0)), 2.0) < 1e-13);
    CHECK(rel_err(evaluate_pressure(EvalPoint{2.0, 0.5}, FractionalOrder(1.0)),
                  2.0 * std::exp(-1.5)) < 1e-13);
    CHECK_THROWS_AS(evaluate_pressure(EvalPoint{-1.0, 0.5}, FractionalOrder(0.5)),
                    ValidationError);
}

TEST_CASE("evaluate_surface equals pointwise evaluation exactly") {
    // The simulated-example grid: 31 x-levels, 11 times.
    std::vector<double> xs, ts;
    for (int i = 0; i < 31; ++i) xs.push_back(0.01 + (10.0 - 0.01) / 30.0 * i);
    for (int j = 0; j < 11; ++j) ts.push_back(0.5 + 0.1 * j);
    const FractionalOrder alpha(0.82);
    const auto grid = evaluate_surface(xs, ts, alpha);
    REQUIRE(grid.size() == xs.size());
    REQUIRE(grid[0].size() == ts.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < ts.size(); ++j)
            CHECK(grid[i][j] == evaluate_pressure(EvalPoint{xs[i], ts[j]}, alpha));  // 0 ulp
}

TEST_CASE("evaluate_surface trivial shapes") {
    const std::vector<double> x0{0.0}, t0{0.0};
    const auto g1 = evaluate_surface(x0, t0, FractionalOrder(0.6));
    CHECK(g1.size() == 1);
    CHECK(g1[0][0] == 2.0);

    const std::vector<double> xs{0.0, 1.0}, ts{1.0};
    const auto g2 = evaluate_surface(xs, ts, FractionalOrder(1.0));
    CHECK(rel_err(g2[0][0], 2.0 * std::exp(1.0)) < 1e-13);
    CHECK(rel_err(g2[1][0], 2.0) < 1e-13);

    CHECK_THROWS_AS(evaluate_surface(std::vector<double>{}, ts, FractionalOrder(0.5)),
                    ValidationError);
}

TEST_CASE("positivity, separability, and monotonicity") {
    const double alphas[] = {0.15, 0.5, 0.82, 1.0};
    for (double a : alphas) {
        const FractionalOrder alpha(a);
        for (double t = 0.0; t <= 2.0; t += 0.25) {
            double prev_in_x = std::numeric_limits<double>::infinity();
            for (double x = 0.0; x <= 10.0; x += 1.25) {
                const double p = evaluate_pressure(EvalPoint{x, t}, alpha);
                CHECK(p > 0.0);
                CHECK(p < prev_in_x);  // decreasing in x
                prev_in_x = p;
                // Separability: p(x,t) / p(0,t) = exp(-x).
                const double p0 = evaluate_pressure(EvalPoint{0.0, t}, alpha);
                CHECK(rel_err(p / p0, std::exp(-x)) < 1e-12);
            }
        }
        for (double x : {0.0, 3.0}) {
            double prev_in_t = 0.0;
            for (double t = 0.0; t <= 2.0; t += 0.1) {
                const double p = evaluate_pressure(EvalPoint{x, t}, alpha);
                CHECK(p > prev_in_t);  // increasing in t
                prev_in_t = p;
            }
        }
    }
}

TEST_CASE("classical limit alpha = 1 over the full window") {
    const FractionalOrder one(1.0);
    for (double x = 0.0; x <= 10.0; x += 0.5)
        for (double t = 0.0; t <= 2.0; t += 0.125) {
            const double want = 2.0 * std::exp(t - x);
            CHECK(rel_err(evaluate_pressure(EvalPoint{x, t}, one), want) < 1e-10);
        }
}

TEST_CASE("tightening rel_tol changes results negligibly") {
    SeriesConfig loose;
    loose.rel_tol = 1e-10;
    SeriesConfig tight;
    tight.rel_tol = 1e-14;
    for (int i = 0; i < 31; ++i) {
        const double x = 0.01 + (10.0 - 0.01) / 30.0 * i;
        for (int j = 0; j < 11; ++j) {
            const double t = 0.5 + 0.1 * j;
            const double a = evaluate_pressure(EvalPoint{x, t}, FractionalOrder(0.82), loose);
            const double b = evaluate_pressure(EvalPoint{x, t}, FractionalOrder(0.82), tight);
            CHECK(rel_err(a, b) < 1e-9);
        }
    }
}

TEST_CASE("series_factor_many is bit-identical to scalar calls") {
    std::vector<double> ts;
    for (int j = 0; j < 11; ++j) ts.push_back(0.5 + 0.1 * j);
    const FractionalOrder alpha(0.73);
    const auto many = series_factor_many(alpha, ts);
    for (std::size_t j = 0; j < ts.size(); ++j)
        CHECK(many[j] == series_factor(alpha, ts[j]));
}
