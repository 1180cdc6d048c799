#include "fracbayes/sir.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "fracbayes/parallel.hpp"
#include "fracbayes/rng.hpp"

namespace fracbayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;

// Stream tags under cfg.seed.
constexpr std::uint64_t kPilotTag = 0xA1;
constexpr std::uint64_t kCandidateTag = 0xA2;
constexpr std::uint64_t kResampleTag = 0xA3;

constexpr int kMaxPilotStages = 100;
constexpr int kMinFinitePilot = 10;

double log_sum_exp(const std::vector<double>& v) {
    double m = kNegInf;
    for (double x : v) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v)
        if (x != kNegInf) s += std::exp(x - m);
    return m + std::log(s);
}

double ess_of_log_weights(const std::vector<double>& v) {
    const double l1 = log_sum_exp(v);
    if (l1 == kNegInf) return 0.0;
    std::vector<double> twice(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) twice[i] = v[i] == kNegInf ? kNegInf : 2.0 * v[i];
    return std::exp(2.0 * l1 - log_sum_exp(twice));
}

// --- transformed coordinates -------------------------------------------------
// u = (logit alpha, ln sigma2) maps the support onto the plane, where a
// normal proposal is well defined.

struct UPoint {
    double u1, u2;
};

UPoint to_u(const Theta& th) {
    return {std::log(th.alpha / (1.0 - th.alpha)), std::log(th.sigma2)};
}

Theta from_u(const UPoint& u) {
    return Theta{1.0 / (1.0 + std::exp(-u.u1)), std::exp(u.u2)};
}

struct Gaussian2 {
    double m1 = 0.0, m2 = 0.0;       // mean
    double l11 = 1.0, l21 = 0.0, l22 = 1.0;  // Cholesky factor of covariance

    static Gaussian2 from_moments(double m1, double m2, double c11, double c12, double c22) {
        // Tiny ridge plus a correlation clamp keep the factorization alive
        // when the pilot weights concentrate.
        c11 = std::max(c11, 1e-12);
        c22 = std::max(c22, 1e-12);
        const double max_c12 = 0.999 * std::sqrt(c11 * c22);
        c12 = std::clamp(c12, -max_c12, max_c12);
        Gaussian2 g;
        g.m1 = m1;
        g.m2 = m2;
        g.l11 = std::sqrt(c11);
        g.l21 = c12 / g.l11;
        g.l22 = std::sqrt(c22 - g.l21 * g.l21);
        return g;
    }

    UPoint draw(CounterRng& rng) const {
        const double z1 = rng.next_normal();
        const double z2 = rng.next_normal();
        return {m1 + l11 * z1, m2 + l21 * z1 + l22 * z2};
    }

    double logpdf(const UPoint& u) const {
        const double w1 = (u.u1 - m1) / l11;
        const double w2 = (u.u2 - m2 - l21 * w1) / l22;
        return -0.5 * (w1 * w1 + w2 * w2) - std::log(l11 * l22) - kLogTwoPi;
    }
};

// Density of theta when u(theta) is normal: the change of variables carries
// Jacobian 1/(alpha(1-alpha)) * 1/sigma2.
double log_density_theta(const Gaussian2& g, const UPoint& u, const Theta& th) {
    return g.logpdf(u) - std::log(th.alpha * (1.0 - th.alpha)) - std::log(th.sigma2);
}

// Posterior kernel for weighting.  Proposals can land at alpha so close to
// zero that the series needs more than k_max terms; posterior mass there is
// vanishing for any dataset on this grid, so such candidates carry zero
// weight instead of aborting the run.
double weight_log_posterior(const Theta& th, const LikelihoodCache& cache,
                            const PriorSpec& prior, const SeriesConfig& series) {
    try {
        return log_unnorm_posterior(th, cache, prior, series);
    } catch (const ConvergenceError&) {
        return kNegInf;
    }
}

// --- fixed-form proposals ----------------------------------------------------

double log_beta_pdf(double x, double a, double b) {
    const double norm = log_gamma(a) + log_gamma(b) - log_gamma(a + b);
    const double ta = a == 1.0 ? 0.0 : (a - 1.0) * std::log(x);
    const double tb = b == 1.0 ? 0.0 : (b - 1.0) * std::log(1.0 - x);
    return ta + tb - norm;
}

double log_chi_square_pdf(double x, double df) {
    const double half = 0.5 * df;
    const double t = half == 1.0 ? 0.0 : (half - 1.0) * std::log(x);
    return t - 0.5 * x - half * std::numbers::ln2 - log_gamma(half);
}

Candidate draw_from_prior(CounterRng& rng, const PriorSpec& prior) {
    Candidate c;
    c.theta.alpha = rng.next_beta(prior.alpha_star, prior.beta_star);
    c.theta.sigma2 = rng.next_chi_square(prior.df);
    c.log_proposal_density = log_beta_pdf(c.theta.alpha, prior.alpha_star, prior.beta_star) +
                             log_chi_square_pdf(c.theta.sigma2, prior.df);
    return c;
}

Candidate draw_from_box(CounterRng& rng, const ProposalBox& box) {
    Candidate c;
    c.theta.alpha = box.alpha_lo + rng.next_uniform() * (box.alpha_hi - box.alpha_lo);
    c.theta.sigma2 = box.sigma2_lo + rng.next_uniform() * (box.sigma2_hi - box.sigma2_lo);
    c.log_proposal_density =
        -std::log((box.alpha_hi - box.alpha_lo) * (box.sigma2_hi - box.sigma2_lo));
    return c;
}

Candidate draw_from_gaussian(CounterRng& rng, const Gaussian2& g) {
    Candidate c;
    const UPoint u = g.draw(rng);
    c.theta = from_u(u);
    if (c.theta.alpha <= 0.0 || c.theta.alpha >= 1.0 || c.theta.sigma2 <= 0.0) {
        // Inverse transform saturated at the support boundary; zero weight.
        c.log_proposal_density = std::numeric_limits<double>::infinity();
        return c;
    }
    c.log_proposal_density = log_density_theta(g, u, c.theta);
    return c;
}

// --- adaptive pilot ----------------------------------------------------------
// Repeatedly: draw a pilot round, flatten the log weight ratios with the
// largest exponent beta <= 1 that keeps ESS above pilot_size/4, and refit a
// moment-matched (inflated) normal in u-space.  Once beta = 1 is affordable
// the fitted normal covers the posterior and becomes the final proposal.
// A single well-matched round reduces to the plain pilot fit.

struct PilotResult {
    Gaussian2 proposal;
    int stages = 0;
};

PilotResult fit_adaptive_pilot(const SirConfig& cfg, const PriorSpec& prior,
                               const LikelihoodCache& cache, const SeriesConfig& series) {
    const int m = cfg.proposal.pilot_size;
    const double ess_target = 0.25 * static_cast<double>(m);

    Gaussian2 fitted;
    bool use_prior = true;

    for (int stage = 0; stage < kMaxPilotStages; ++stage) {
        std::vector<Candidate> pilot(static_cast<std::size_t>(m));
        parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
            CounterRng rng(cfg.seed, substream(kPilotTag, static_cast<std::uint64_t>(stage), i));
            pilot[i] = use_prior ? draw_from_prior(rng, prior) : draw_from_gaussian(rng, fitted);
        });

        std::vector<double> ratio(pilot.size(), kNegInf);
        parallel_for(pilot.size(), [&](std::size_t i) {
            if (std::isinf(pilot[i].log_proposal_density)) return;
            const double lp = weight_log_posterior(pilot[i].theta, cache, prior, series);
            if (lp == kNegInf) return;
            ratio[i] = lp - pilot[i].log_proposal_density;
        });

        int n_finite = 0;
        for (double r : ratio)
            if (r != kNegInf) ++n_finite;
        if (n_finite < kMinFinitePilot)
            throw DegeneracyError(
                "adaptive pilot degenerated (" + std::to_string(n_finite) +
                    " finite weights); widen the prior or use a UniformBox proposal",
                n_finite);

        // Largest tempering exponent whose flattened weights keep enough ESS.
        auto ess_at = [&](double beta) {
            std::vector<double> v(ratio.size());
            for (std::size_t i = 0; i < ratio.size(); ++i)
                v[i] = ratio[i] == kNegInf ? kNegInf : beta * ratio[i];
            return ess_of_log_weights(v);
        };
        double beta = 1.0;
        if (ess_at(1.0) < ess_target) {
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (ess_at(mid) >= ess_target ? lo : hi) = mid;
            }
            beta = lo;
        }

        std::vector<double> flattened(ratio.size());
        for (std::size_t i = 0; i < ratio.size(); ++i)
            flattened[i] = ratio[i] == kNegInf ? kNegInf : beta * ratio[i];
        const std::vector<double> w = normalize_weights(flattened);

        double m1 = 0.0, m2 = 0.0;
        std::vector<UPoint> us(pilot.size());
        for (std::size_t i = 0; i < pilot.size(); ++i) {
            us[i] = to_u(pilot[i].theta);
            m1 += w[i] * us[i].u1;
            m2 += w[i] * us[i].u2;
        }
        double c11 = 0.0, c12 = 0.0, c22 = 0.0;
        for (std::size_t i = 0; i < pilot.size(); ++i) {
            if (w[i] == 0.0) continue;
            const double d1 = us[i].u1 - m1;
            const double d2 = us[i].u2 - m2;
            c11 += w[i] * d1 * d1;
            c12 += w[i] * d1 * d2;
            c22 += w[i] * d2 * d2;
        }
        if (!std::isfinite(m1) || !std::isfinite(m2) || !std::isfinite(c11) || !std::isfinite(c22))
            throw DegeneracyError("adaptive pilot produced non-finite moments", n_finite);

        fitted = Gaussian2::from_moments(m1, m2, cfg.proposal.inflation * c11,
                                         cfg.proposal.inflation * c12,
                                         cfg.proposal.inflation * c22);
        use_prior = false;
        if (beta >= 1.0) return PilotResult{fitted, stage + 1};
    }
    throw DegeneracyError("adaptive pilot tempering failed to reach beta = 1 within " +
                              std::to_string(kMaxPilotStages) + " stages",
                          0);
}

std::vector<Candidate> draw_candidates_impl(const SirConfig& cfg, const PriorSpec& prior,
                                            const Dataset& dataset, const SeriesConfig& series,
                                            int* pilot_stages_out) {
    cfg.validate();
    prior.validate();
    series.validate();

    std::vector<Candidate> out(static_cast<std::size_t>(cfg.n_c));
    switch (cfg.proposal.kind) {
        case ProposalKind::Prior:
            parallel_for(out.size(), [&](std::size_t i) {
                CounterRng rng(cfg.seed, substream(kCandidateTag, i));
                out[i] = draw_from_prior(rng, prior);
            });
            break;
        case ProposalKind::UniformBox:
            parallel_for(out.size(), [&](std::size_t i) {
                CounterRng rng(cfg.seed, substream(kCandidateTag, i));
                out[i] = draw_from_box(rng, *cfg.proposal.box);
            });
            break;
        case ProposalKind::AdaptivePilot: {
            const LikelihoodCache cache(dataset);
            const PilotResult pilot = fit_adaptive_pilot(cfg, prior, cache, series);
            if (pilot_stages_out) *pilot_stages_out = pilot.stages;
            parallel_for(out.size(), [&](std::size_t i) {
                CounterRng rng(cfg.seed, substream(kCandidateTag, i));
                out[i] = draw_from_gaussian(rng, pilot.proposal);
            });
            break;
        }
    }
    return out;
}

}  // namespace

void ProposalSpec::validate() const {
    if (kind == ProposalKind::UniformBox) {
        if (!box) throw ValidationError("proposal.box required for UniformBox");
        if (!(box->alpha_lo >= 0.0 && box->alpha_lo < box->alpha_hi && box->alpha_hi <= 1.0))
            throw ValidationError("proposal.box alpha range must satisfy 0 <= lo < hi <= 1");
        if (!(box->sigma2_lo >= 0.0 && box->sigma2_lo < box->sigma2_hi))
            throw ValidationError("proposal.box sigma2 range must satisfy 0 <= lo < hi");
    } else if (box) {
        throw ValidationError("proposal.box only valid with UniformBox");
    }
    if (pilot_size < 100) throw ValidationError("proposal.pilot_size must be >= 100");
    if (!(inflation >= 1.0)) throw ValidationError("proposal.inflation must be >= 1");
}

void SirConfig::validate() const {
    if (n_c < 1) throw ValidationError("sir.n_c must be >= 1");
    if (n_s < 1) throw ValidationError("sir.n_s must be >= 1");
    if (n_s > n_c) throw ValidationError("sir.n_s must be <= sir.n_c");
    proposal.validate();
}

std::vector<Candidate> draw_candidates(const SirConfig& cfg, const PriorSpec& prior,
                                       const Dataset& dataset, const SeriesConfig& series) {
    return draw_candidates_impl(cfg, prior, dataset, series, nullptr);
}

std::vector<double> compute_log_weights(const std::vector<Candidate>& candidates,
                                        const Dataset& dataset, const PriorSpec& prior,
                                        const SeriesConfig& series) {
    if (candidates.empty()) throw ValidationError("compute_log_weights needs candidates");
    const LikelihoodCache cache(dataset);
    std::vector<double> logw(candidates.size(), kNegInf);
    parallel_for(candidates.size(), [&](std::size_t i) {
        const Candidate& c = candidates[i];
        if (std::isinf(c.log_proposal_density)) return;  // boundary draw
        const double lp = weight_log_posterior(c.theta, cache, prior, series);
        if (lp == kNegInf) return;
        logw[i] = lp - c.log_proposal_density;
    });
    bool any_finite = false;
    for (double w : logw)
        if (w != kNegInf) any_finite = true;
    if (!any_finite)
        throw DegeneracyError("all importance weights are zero (total degeneracy)", 0);
    return logw;
}

std::vector<double> normalize_weights(const std::vector<double>& log_weights) {
    if (log_weights.empty()) throw ValidationError("normalize_weights needs weights");
    double m = kNegInf;
    for (double w : log_weights) {
        if (std::isnan(w)) throw ValidationError("normalize_weights got NaN log weight");
        m = std::max(m, w);
    }
    if (m == kNegInf)
        throw DegeneracyError("no finite importance weights (total degeneracy)", 0);
    const double lse = log_sum_exp(log_weights);
    std::vector<double> w(log_weights.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (log_weights[i] != kNegInf) w[i] = std::exp(log_weights[i] - lse);
        total += w[i];
    }
    for (double& wi : w) wi /= total;
    return w;
}

PosteriorSampleSet resample(const std::vector<Candidate>& candidates,
                            const std::vector<double>& weights, int n_s, std::uint64_t seed) {
    if (candidates.empty() || weights.size() != candidates.size())
        throw ValidationError("resample needs matching candidates and weights");
    if (n_s < 1) throw ValidationError("resample needs n_s >= 1");

    std::vector<double> cumulative(weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        cumulative[i] = acc;
    }
    cumulative.back() = 1.0;  // absorb rounding

    PosteriorSampleSet out;
    out.samples.reserve(static_cast<std::size_t>(n_s));
    out.candidate_index.reserve(static_cast<std::size_t>(n_s));
    CounterRng rng(seed, kResampleTag);
    for (int j = 0; j < n_s; ++j) {
        const double u = rng.next_uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        int idx = static_cast<int>(it - cumulative.begin());
        if (idx >= static_cast<int>(weights.size())) idx = static_cast<int>(weights.size()) - 1;
        // Rounding in the cumulative sum must not select a zero-weight tail.
        while (idx > 0 && weights[static_cast<std::size_t>(idx)] == 0.0) --idx;
        out.candidate_index.push_back(idx);
        out.samples.push_back(candidates[static_cast<std::size_t>(idx)].theta);
    }

    SirDiagnostics d;
    std::unordered_set<int> distinct(out.candidate_index.begin(), out.candidate_index.end());
    d.unique_fraction = static_cast<double>(distinct.size()) / static_cast<double>(n_s);
    double sum_sq = 0.0, max_w = 0.0;
    int n_finite = 0;
    for (double w : weights) {
        sum_sq += w * w;
        max_w = std::max(max_w, w);
        if (w > 0.0) ++n_finite;
    }
    d.ess = sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
    d.max_weight = max_w;
    d.n_finite_weights = n_finite;
    out.diagnostics = d;
    return out;
}

PosteriorSampleSet run_sir(const Dataset& dataset, const PriorSpec& prior, const SirConfig& cfg,
                           const SeriesConfig& series) {
    cfg.validate();
    int pilot_stages = 0;
    const std::vector<Candidate> candidates =
        draw_candidates_impl(cfg, prior, dataset, series, &pilot_stages);
    const std::vector<double> log_weights =
        compute_log_weights(candidates, dataset, prior, series);
    const std::vector<double> weights = normalize_weights(log_weights);
    PosteriorSampleSet out = resample(candidates, weights, cfg.n_s, cfg.seed);
    out.diagnostics.pilot_stages = pilot_stages;
    return out;
}

}  // namespace fracbayes
