#include "fracbayes/experiments.hpp"

#include <cmath>

#include "fracbayes/parallel.hpp"
#include "fracbayes/rng.hpp"

namespace fracbayes {

namespace {

// Replicate seeds: base_seed combined with a packed (purpose, cell,
// replicate) index.  The packing is injective for studies below 2^24 cells
// and replicates, so derived streams never collide.
constexpr std::uint64_t kDataPurpose = 1;
constexpr std::uint64_t kFitPurpose = 2;

std::uint64_t study_seed(std::uint64_t base, std::uint64_t purpose, std::uint64_t cell,
                         std::uint64_t replicate) {
    return substream(base, (purpose << 48) | (cell << 24) | replicate);
}

}  // namespace

FitOutcome simulate_and_fit(double alpha_true, double sigma_true, std::uint64_t data_seed,
                            std::uint64_t fit_seed, const GridSpec& grid, const PriorSpec& prior,
                            const SirConfig& sir, const SeriesConfig& series) {
    FitOutcome out;
    try {
        const Dataset data =
            simulate_dataset(grid, FractionalOrder(alpha_true), sigma_true, data_seed, series);
        SirConfig cfg = sir;
        cfg.seed = fit_seed;
        const PosteriorSampleSet posterior = run_sir(data, prior, cfg, series);
        std::vector<double> alphas, sigmas;
        alphas.reserve(posterior.samples.size());
        sigmas.reserve(posterior.samples.size());
        for (const Theta& th : posterior.samples) {
            alphas.push_back(th.alpha);
            sigmas.push_back(std::sqrt(th.sigma2));
        }
        out.ci_alpha = credible_interval(alphas, 0.95);
        out.ci_sigma = credible_interval(sigmas, 0.95);
        out.diagnostics = posterior.diagnostics;
    } catch (const Error& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

void RobustnessConfig::validate() const {
    if (alphas.empty() || sigmas.empty())
        throw ValidationError("robustness needs nonempty alphas and sigmas");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw ValidationError("robustness alphas must lie in (0,1)");
    for (double s : sigmas)
        if (!(s > 0.0)) throw ValidationError("robustness sigmas must be > 0");
    sir.validate();
    prior.validate();
    grid.validate();
    series.validate();
}

std::vector<RobustnessCell> robustness_study(const RobustnessConfig& cfg) {
    cfg.validate();
    const std::size_t n_cells = cfg.alphas.size() * cfg.sigmas.size();
    std::vector<RobustnessCell> cells(n_cells);
    parallel_for(n_cells, [&](std::size_t c) {
        const double alpha = cfg.alphas[c / cfg.sigmas.size()];
        const double sigma = cfg.sigmas[c % cfg.sigmas.size()];
        const FitOutcome fit = simulate_and_fit(
            alpha, sigma, study_seed(cfg.base_seed, kDataPurpose, c, 0),
            study_seed(cfg.base_seed, kFitPurpose, c, 0), cfg.grid, cfg.prior, cfg.sir, cfg.series);
        RobustnessCell& cell = cells[c];
        cell.alpha_true = alpha;
        cell.sigma_true = sigma;
        cell.failed = fit.failed;
        cell.error = fit.error;
        if (!fit.failed) {
            cell.ci_alpha = fit.ci_alpha;
            cell.ci_sigma = fit.ci_sigma;
            cell.contains_alpha = fit.ci_alpha.contains(alpha);
            cell.contains_sigma = fit.ci_sigma.contains(sigma);
        }
    });
    return cells;
}

void PriorSensitivityConfig::validate() const {
    if (shape_values.empty()) throw ValidationError("prior sensitivity needs shape_values");
    for (double s : shape_values)
        if (!(s > 0.0)) throw ValidationError("prior sensitivity shapes must be > 0");
    if (!(alpha_true > 0.0 && alpha_true < 1.0))
        throw ValidationError("prior sensitivity alpha_true must lie in (0,1)");
    if (!(sigma_true > 0.0)) throw ValidationError("prior sensitivity sigma_true must be > 0");
    if (!(df > 0.0)) throw ValidationError("prior sensitivity df must be > 0");
    sir.validate();
    grid.validate();
    series.validate();
}

std::vector<PriorSensitivityRow> prior_sensitivity_study(const PriorSensitivityConfig& cfg) {
    cfg.validate();
    // One dataset reused across all shapes, so rows differ only by prior.
    const std::uint64_t data_seed = study_seed(cfg.base_seed, kDataPurpose, 0, 0);
    const Dataset data = simulate_dataset(cfg.grid, FractionalOrder(cfg.alpha_true),
                                          cfg.sigma_true, data_seed, cfg.series);

    std::vector<PriorSensitivityRow> rows(cfg.shape_values.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        PriorSensitivityRow& row = rows[i];
        row.shape = cfg.shape_values[i];
        PriorSpec prior;
        prior.alpha_star = row.shape;
        prior.beta_star = row.shape;
        prior.df = cfg.df;
        SirConfig sir = cfg.sir;
        sir.seed = study_seed(cfg.base_seed, kFitPurpose, i, 0);
        try {
            const PosteriorSampleSet posterior = run_sir(data, prior, sir, cfg.series);
            std::vector<double> alphas, sigmas;
            for (const Theta& th : posterior.samples) {
                alphas.push_back(th.alpha);
                sigmas.push_back(std::sqrt(th.sigma2));
            }
            row.ci_alpha = credible_interval(alphas, 0.95);
            row.ci_sigma = credible_interval(sigmas, 0.95);
            row.contains_alpha = row.ci_alpha.contains(cfg.alpha_true);
            row.contains_sigma = row.ci_sigma.contains(cfg.sigma_true);
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
        }
    });
    return rows;
}

void CoverageConfig::validate() const {
    if (m < 1) throw ValidationError("coverage.m must be >= 1");
    if (alphas.empty() || sigmas.empty())
        throw ValidationError("coverage needs nonempty alphas and sigmas");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw ValidationError("coverage alphas must lie in (0,1)");
    for (double s : sigmas)
        if (!(s > 0.0)) throw ValidationError("coverage sigmas must be > 0");
    sir.validate();
    prior.validate();
    grid.validate();
    series.validate();
}

CoverageResult coverage_study(const CoverageConfig& cfg) {
    cfg.validate();
    const std::size_t n_cells = cfg.alphas.size() * cfg.sigmas.size();
    const std::size_t m = static_cast<std::size_t>(cfg.m);

    CoverageResult result;
    result.replicates.resize(n_cells * m);
    parallel_for(n_cells * m, [&](std::size_t idx) {
        const std::size_t c = idx / m;
        const std::size_t r = idx % m;
        const double alpha = cfg.alphas[c / cfg.sigmas.size()];
        const double sigma = cfg.sigmas[c % cfg.sigmas.size()];
        const FitOutcome fit = simulate_and_fit(
            alpha, sigma, study_seed(cfg.base_seed, kDataPurpose, c, r),
            study_seed(cfg.base_seed, kFitPurpose, c, r), cfg.grid, cfg.prior, cfg.sir, cfg.series);
        CoverageReplicate& rep = result.replicates[idx];
        rep.cell = static_cast<int>(c);
        rep.replicate = static_cast<int>(r);
        rep.failed = fit.failed;
        rep.error = fit.error;
        if (!fit.failed) {
            rep.ci_alpha = fit.ci_alpha;
            rep.ci_sigma = fit.ci_sigma;
            rep.contains_alpha = fit.ci_alpha.contains(alpha);
            rep.contains_sigma = fit.ci_sigma.contains(sigma);
        }
    });

    result.cells.resize(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        CoverageCell& cell = result.cells[c];
        cell.alpha_true = cfg.alphas[c / cfg.sigmas.size()];
        cell.sigma_true = cfg.sigmas[c % cfg.sigmas.size()];
        cell.m = cfg.m;
        int hit_alpha = 0, hit_sigma = 0, degenerate = 0;
        for (std::size_t r = 0; r < m; ++r) {
            const CoverageReplicate& rep = result.replicates[c * m + r];
            if (rep.failed) {
                ++degenerate;  // counted as non-covering
                continue;
            }
            hit_alpha += rep.contains_alpha ? 1 : 0;
            hit_sigma += rep.contains_sigma ? 1 : 0;
        }
        cell.coverage_alpha = static_cast<double>(hit_alpha) / static_cast<double>(cfg.m);
        cell.coverage_sigma = static_cast<double>(hit_sigma) / static_cast<double>(cfg.m);
        cell.n_degenerate = degenerate;
    }
    return result;
}

}  // namespace fracbayes
