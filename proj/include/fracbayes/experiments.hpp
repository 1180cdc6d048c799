#ifndef FRACBAYES_EXPERIMENTS_HPP_
#define FRACBAYES_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include "fracbayes/inference.hpp"
#include "fracbayes/sir.hpp"

namespace fracbayes {

// One simulate-and-fit run; the unit every study is built from.
struct FitOutcome {
    CredibleInterval ci_alpha;
    CredibleInterval ci_sigma;  // interval of sigma = sqrt(sigma2) draws
    SirDiagnostics diagnostics;
    bool failed = false;
    std::string error;
};

// Simulates a dataset at (alpha_true, sigma_true) with data_seed, fits it
// with the given SIR settings under fit_seed, and summarizes both marginals.
FitOutcome simulate_and_fit(double alpha_true, double sigma_true, std::uint64_t data_seed,
                            std::uint64_t fit_seed, const GridSpec& grid, const PriorSpec& prior,
                            const SirConfig& sir, const SeriesConfig& series);

struct RobustnessConfig {
    std::vector<double> alphas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> sigmas = {0.01, 0.1, 0.25};
    std::uint64_t base_seed = 7011;
    SirConfig sir;
    PriorSpec prior;
    GridSpec grid;
    SeriesConfig series;

    void validate() const;
};

struct RobustnessCell {
    double alpha_true = 0.0;
    double sigma_true = 0.0;
    CredibleInterval ci_alpha;
    CredibleInterval ci_sigma;
    bool contains_alpha = false;
    bool contains_sigma = false;
    bool failed = false;
    std::string error;
};

// One dataset and one fit per (alpha, sigma) cell; SIR failures are
// reported in the cell, never dropped.
std::vector<RobustnessCell> robustness_study(const RobustnessConfig& cfg);

struct PriorSensitivityConfig {
    std::vector<double> shape_values = {1, 3, 5, 10, 20, 50, 100};
    double alpha_true = 0.82;
    double sigma_true = 0.1;
    double df = 1.0;
    std::uint64_t base_seed = 1833;
    SirConfig sir;
    GridSpec grid;
    SeriesConfig series;

    void validate() const;
};

struct PriorSensitivityRow {
    double shape = 0.0;  // applied to both Beta shape parameters
    CredibleInterval ci_alpha;
    CredibleInterval ci_sigma;
    bool contains_alpha = false;
    bool contains_sigma = false;
    bool failed = false;
    std::string error;
};

// One shared dataset, refit under Beta(shape, shape) priors of increasing
// concentration.
std::vector<PriorSensitivityRow> prior_sensitivity_study(const PriorSensitivityConfig& cfg);

struct CoverageConfig {
    int m = 200;  // replicates per cell
    std::vector<double> alphas = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> sigmas = {0.01, 0.1, 0.25};
    std::uint64_t base_seed = 1833;
    SirConfig sir;
    PriorSpec prior;
    GridSpec grid;
    SeriesConfig series;

    void validate() const;
};

struct CoverageReplicate {
    int cell = 0;
    int replicate = 0;
    CredibleInterval ci_alpha;
    CredibleInterval ci_sigma;
    bool contains_alpha = false;
    bool contains_sigma = false;
    bool failed = false;
    std::string error;
};

struct CoverageCell {
    double alpha_true = 0.0;
    double sigma_true = 0.0;
    int m = 0;
    double coverage_alpha = 0.0;  // multiples of 1/m
    double coverage_sigma = 0.0;
    int n_degenerate = 0;  // failed replicates, counted as non-covering
};

struct CoverageResult {
    std::vector<CoverageCell> cells;
    std::vector<CoverageReplicate> replicates;
};

// m independent datasets per cell, each fit once; coverage is the fraction
// of replicates whose 95% interval contains the truth.
CoverageResult coverage_study(const CoverageConfig& cfg);

}  // namespace fracbayes

#endif  // FRACBAYES_EXPERIMENTS_HPP_
