// fracbayes: estimate the fractional order of a time-fractional
// advection-diffusion model from noisy pressure data via sampling
// importance resampling, plus the simulation studies around it.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracbayes/config_json.hpp"
#include "fracbayes/experiments.hpp"
#include "fracbayes/inference.hpp"
#include "fracbayes/parallel.hpp"
#include "fracbayes/rng.hpp"
#include "fracbayes/sir.hpp"

namespace {

using namespace fracbayes;

constexpr std::uint64_t kPredictSeedTag = 0xC1;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path);
    return out;
}

void write_samples_csv(const PosteriorSampleSet& posterior, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "alpha,sigma2\n";
    for (const Theta& th : posterior.samples)
        out << fmt(th.alpha) << ',' << fmt(th.sigma2) << '\n';
}

std::vector<Theta> read_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open samples file: " + path);
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw ValidationError("empty samples file: " + path);
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "alpha,sigma2")
        throw ParseError("expected header 'alpha,sigma2', got '" + line + "'", row);
    std::vector<Theta> samples;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t c = line.find(',');
        if (c == std::string::npos) throw ParseError("expected two fields", row);
        try {
            samples.push_back(Theta{std::stod(line.substr(0, c)), std::stod(line.substr(c + 1))});
        } catch (const std::exception&) {
            throw ParseError("non-numeric sample", row);
        }
        if (!(samples.back().alpha > 0.0 && samples.back().alpha <= 1.0 &&
              samples.back().sigma2 > 0.0))
            throw ParseError("sample outside the support", row);
    }
    if (samples.empty()) throw ValidationError("empty samples file: " + path);
    return samples;
}

std::string sanitize(std::string msg) {
    for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
    return msg;
}

// ---- subcommands ------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const std::string& out_path) {
    if (!cfg.truth) throw ValidationError("truth required for simulate");
    const Dataset data = simulate_dataset(cfg.grid, FractionalOrder(cfg.truth->alpha),
                                          cfg.truth->sigma, cfg.seed, cfg.series);
    write_dataset(data, out_path);
    std::cout << "simulated " << data.observations.size() << " observations (alpha="
              << cfg.truth->alpha << ", sigma=" << cfg.truth->sigma << ", seed=" << cfg.seed
              << ") -> " << out_path << "\n";
    return 0;
}

int cmd_fit(const RunConfig& cfg, const std::string& data_path, const std::string& out_samples,
            const std::string& out_diag, const std::string& out_intervals) {
    const Dataset data = read_dataset(std::filesystem::path(data_path));

    PosteriorSampleSet posterior;
    try {
        posterior = run_sir(data, cfg.prior, cfg.sir, cfg.series);
    } catch (const DegeneracyError& e) {
        // Diagnostics still written so failed fits can be inspected.
        SirDiagnostics d;
        d.n_finite_weights = e.n_finite_weights();
        std::ofstream diag = open_output(out_diag);
        diag << diagnostics_to_json(d).dump(2) << '\n';
        throw;
    }

    write_samples_csv(posterior, out_samples);
    std::ofstream diag = open_output(out_diag);
    diag << diagnostics_to_json(posterior.diagnostics).dump(2) << '\n';

    std::vector<double> alphas, sigmas;
    for (const Theta& th : posterior.samples) {
        alphas.push_back(th.alpha);
        sigmas.push_back(std::sqrt(th.sigma2));
    }
    const CredibleInterval ci_a = credible_interval(alphas, 0.95);
    const CredibleInterval ci_s = credible_interval(sigmas, 0.95);
    if (!out_intervals.empty()) {
        nlohmann::json j = nlohmann::json::array();
        j.push_back(interval_to_json("alpha", ci_a));
        j.push_back(interval_to_json("sigma", ci_s));
        std::ofstream iv = open_output(out_intervals);
        iv << j.dump(2) << '\n';
    }

    char line[256];
    std::snprintf(line, sizeof line,
                  "alpha: 95%% CI (%.6f, %.6f)  width %.6f\n"
                  "sigma: 95%% CI (%.6f, %.6f)\n"
                  "diagnostics: unique_fraction=%.4f ess=%.1f max_weight=%.3g "
                  "n_finite_weights=%d pilot_stages=%d\n",
                  ci_a.lo, ci_a.hi, ci_a.width(), ci_s.lo, ci_s.hi,
                  posterior.diagnostics.unique_fraction, posterior.diagnostics.ess,
                  posterior.diagnostics.max_weight, posterior.diagnostics.n_finite_weights,
                  posterior.diagnostics.pilot_stages);
    std::cout << line;
    return 0;
}

int cmd_predict(const RunConfig& cfg, const std::string& samples_path,
                const std::string& out_path) {
    PosteriorSampleSet posterior;
    posterior.samples = read_samples_csv(samples_path);

    auto default_slices = [](double lo, double hi, int n) {
        // First, middle, last grid lines.
        std::vector<double> v;
        if (n == 1) return std::vector<double>{lo};
        const double step = (hi - lo) / static_cast<double>(n - 1);
        v.push_back(lo);
        v.push_back(lo + step * ((n - 1) / 2));
        v.push_back(hi);
        return v;
    };
    const std::vector<double> x_slices = cfg.predict.x_slices.empty()
                                             ? default_slices(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_x)
                                             : cfg.predict.x_slices;
    const std::vector<double> t_slices = cfg.predict.t_slices.empty()
                                             ? default_slices(cfg.grid.t_min, cfg.grid.t_max, cfg.grid.n_t)
                                             : cfg.predict.t_slices;

    const std::uint64_t seed = substream(cfg.seed, kPredictSeedTag);
    std::vector<PredictiveProfile> profiles = predictive_profiles(
        posterior, cfg.grid, x_slices, 'x', cfg.predict.draws_per_sample, seed, cfg.series);
    const std::vector<PredictiveProfile> t_profiles = predictive_profiles(
        posterior, cfg.grid, t_slices, 't', cfg.predict.draws_per_sample, seed, cfg.series);
    profiles.insert(profiles.end(), t_profiles.begin(), t_profiles.end());

    std::ofstream out = open_output(out_path);
    out << "fixed_label,fixed_value,coord,q025,q50,q975\n";
    for (const PredictiveProfile& p : profiles)
        for (const ProfilePoint& pt : p.points)
            out << p.fixed_label << ',' << fmt(p.fixed_value) << ',' << fmt(pt.coord) << ','
                << fmt(pt.q025) << ',' << fmt(pt.q50) << ',' << fmt(pt.q975) << '\n';

    std::cout << "wrote " << profiles.size() << " profiles (" << x_slices.size()
              << " x-slices, " << t_slices.size() << " t-slices) -> " << out_path << "\n";
    return 0;
}

int cmd_robustness(const RobustnessConfig& cfg, const std::string& out_path,
                   const std::string& json_path) {
    const std::vector<RobustnessCell> cells = robustness_study(cfg);

    std::ofstream out = open_output(out_path);
    out << "alpha_true,sigma_true,alpha_q025,alpha_q975,sigma_q025,sigma_q975,"
           "contains_alpha,contains_sigma,status\n";
    int both = 0, failed = 0;
    for (const RobustnessCell& c : cells) {
        out << fmt(c.alpha_true) << ',' << fmt(c.sigma_true) << ',' << fmt(c.ci_alpha.lo) << ','
            << fmt(c.ci_alpha.hi) << ',' << fmt(c.ci_sigma.lo) << ',' << fmt(c.ci_sigma.hi) << ','
            << (c.contains_alpha ? 1 : 0) << ',' << (c.contains_sigma ? 1 : 0) << ','
            << (c.failed ? "error:" + sanitize(c.error) : "ok") << '\n';
        both += (!c.failed && c.contains_alpha && c.contains_sigma) ? 1 : 0;
        failed += c.failed ? 1 : 0;
    }
    if (!json_path.empty()) {
        nlohmann::json j;
        j["n_cells"] = cells.size();
        j["n_contain_both"] = both;
        j["n_failed"] = failed;
        nlohmann::json arr = nlohmann::json::array();
        for (const RobustnessCell& c : cells)
            arr.push_back({{"alpha_true", c.alpha_true},
                           {"sigma_true", c.sigma_true},
                           {"ci_alpha", {c.ci_alpha.lo, c.ci_alpha.hi}},
                           {"ci_sigma", {c.ci_sigma.lo, c.ci_sigma.hi}},
                           {"contains_alpha", c.contains_alpha},
                           {"contains_sigma", c.contains_sigma},
                           {"failed", c.failed}});
        j["cells"] = arr;
        std::ofstream js = open_output(json_path);
        js << j.dump(2) << '\n';
    }
    std::cout << both << "/" << cells.size() << " cells contain both true parameters";
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << " -> " << out_path << "\n";
    return failed == static_cast<int>(cells.size()) ? 1 : 0;
}

int cmd_prior_sensitivity(const PriorSensitivityConfig& cfg, const std::string& out_path,
                          const std::string& json_path) {
    const std::vector<PriorSensitivityRow> rows = prior_sensitivity_study(cfg);

    std::ofstream out = open_output(out_path);
    out << "shape,alpha_q025,alpha_q975,sigma_q025,sigma_q975,contains_alpha,contains_sigma,"
           "status\n";
    int contain = 0, failed = 0;
    for (const PriorSensitivityRow& r : rows) {
        out << fmt(r.shape) << ',' << fmt(r.ci_alpha.lo) << ',' << fmt(r.ci_alpha.hi) << ','
            << fmt(r.ci_sigma.lo) << ',' << fmt(r.ci_sigma.hi) << ',' << (r.contains_alpha ? 1 : 0)
            << ',' << (r.contains_sigma ? 1 : 0) << ','
            << (r.failed ? "error:" + sanitize(r.error) : "ok") << '\n';
        contain += (!r.failed && r.contains_alpha) ? 1 : 0;
        failed += r.failed ? 1 : 0;
    }
    if (!json_path.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const PriorSensitivityRow& r : rows)
            arr.push_back({{"shape", r.shape},
                           {"ci_alpha", {r.ci_alpha.lo, r.ci_alpha.hi}},
                           {"ci_sigma", {r.ci_sigma.lo, r.ci_sigma.hi}},
                           {"contains_alpha", r.contains_alpha},
                           {"contains_sigma", r.contains_sigma},
                           {"failed", r.failed}});
        std::ofstream js = open_output(json_path);
        js << nlohmann::json{{"rows", arr}}.dump(2) << '\n';
    }
    std::cout << contain << "/" << rows.size() << " shapes contain the true alpha";
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << " -> " << out_path << "\n";
    return failed == static_cast<int>(rows.size()) ? 1 : 0;
}

int cmd_coverage(const CoverageConfig& cfg, const std::string& out_path,
                 const std::string& json_path, bool per_replicate) {
    const CoverageResult result = coverage_study(cfg);

    std::ofstream out = open_output(out_path);
    if (per_replicate) {
        out << "alpha_true,sigma_true,replicate,alpha_q025,alpha_q975,sigma_q025,sigma_q975,"
               "contains_alpha,contains_sigma,status\n";
        for (const CoverageReplicate& r : result.replicates) {
            const CoverageCell& c = result.cells[static_cast<std::size_t>(r.cell)];
            out << fmt(c.alpha_true) << ',' << fmt(c.sigma_true) << ',' << r.replicate << ','
                << fmt(r.ci_alpha.lo) << ',' << fmt(r.ci_alpha.hi) << ',' << fmt(r.ci_sigma.lo)
                << ',' << fmt(r.ci_sigma.hi) << ',' << (r.contains_alpha ? 1 : 0) << ','
                << (r.contains_sigma ? 1 : 0) << ','
                << (r.failed ? "error:" + sanitize(r.error) : "ok") << '\n';
        }
    } else {
        out << "alpha_true,sigma_true,m,coverage_alpha,coverage_sigma,n_degenerate\n";
        for (const CoverageCell& c : result.cells)
            out << fmt(c.alpha_true) << ',' << fmt(c.sigma_true) << ',' << c.m << ','
                << fmt(c.coverage_alpha) << ',' << fmt(c.coverage_sigma) << ',' << c.n_degenerate
                << '\n';
    }
    if (!json_path.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        double min_cov = 1.0;
        for (const CoverageCell& c : result.cells) {
            arr.push_back({{"alpha_true", c.alpha_true},
                           {"sigma_true", c.sigma_true},
                           {"m", c.m},
                           {"coverage_alpha", c.coverage_alpha},
                           {"coverage_sigma", c.coverage_sigma},
                           {"n_degenerate", c.n_degenerate}});
            min_cov = std::min({min_cov, c.coverage_alpha, c.coverage_sigma});
        }
        std::ofstream js = open_output(json_path);
        js << nlohmann::json{{"cells", arr}, {"min_coverage", min_cov}}.dump(2) << '\n';
    }
    double min_cov = 1.0;
    int degenerate = 0;
    for (const CoverageCell& c : result.cells) {
        min_cov = std::min({min_cov, c.coverage_alpha, c.coverage_sigma});
        degenerate += c.n_degenerate;
    }
    std::cout << result.cells.size() << " cells x m=" << cfg.m
              << ": min coverage " << min_cov;
    if (degenerate > 0) std::cout << " (" << degenerate << " degenerate replicates)";
    std::cout << " -> " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian estimation of the fractional order of a time-fractional "
                 "advection-diffusion model via sampling importance resampling"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed_override = 0;
    bool have_seed_override = false;
    int threads = 0;

    app.add_option("--threads", threads, "cap worker threads (0 = all cores)")
        ->envname("FRACBAYES_THREADS");

    auto add_common = [&](CLI::App* sub) {
        sub->fallthrough();  // lets --threads appear after the subcommand
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option_function<std::uint64_t>(
               "--seed",
               [&](std::uint64_t s) {
                   seed_override = s;
                   have_seed_override = true;
               },
               "override the config seed");
    };

    CLI::App* simulate = app.add_subcommand("simulate", "simulate a noisy dataset");
    std::string sim_out = "dataset.csv";
    add_common(simulate);
    simulate->add_option("--out", sim_out, "output dataset CSV");

    CLI::App* fit = app.add_subcommand("fit", "fit a dataset with SIR");
    std::string fit_data, fit_samples = "samples.csv", fit_diag = "diagnostics.json",
                fit_intervals;
    add_common(fit);
    fit->add_option("--data", fit_data, "input dataset CSV")->required();
    fit->add_option("--out-samples", fit_samples, "output posterior sample CSV");
    fit->add_option("--out-diag", fit_diag, "output diagnostics JSON");
    fit->add_option("--out-intervals", fit_intervals, "optional credible interval JSON");

    CLI::App* predict = app.add_subcommand("predict", "posterior predictive profiles");
    std::string pred_samples, pred_out = "profiles.csv";
    add_common(predict);
    predict->add_option("--samples", pred_samples, "posterior sample CSV")->required();
    predict->add_option("--out", pred_out, "output profile CSV");

    CLI::App* robustness = app.add_subcommand("robustness", "robustness study over (alpha, sigma)");
    std::string rob_out = "robustness.csv", rob_json;
    add_common(robustness);
    robustness->add_option("--out", rob_out, "output CSV");
    robustness->add_option("--json", rob_json, "optional JSON summary");

    CLI::App* prior_sens =
        app.add_subcommand("prior-sensitivity", "Beta prior concentration study");
    std::string ps_out = "prior_sensitivity.csv", ps_json;
    add_common(prior_sens);
    prior_sens->add_option("--out", ps_out, "output CSV");
    prior_sens->add_option("--json", ps_json, "optional JSON summary");

    CLI::App* coverage = app.add_subcommand("coverage", "coverage probability study");
    std::string cov_out = "coverage.csv", cov_json;
    bool per_replicate = false;
    add_common(coverage);
    coverage->add_option("--out", cov_out, "output CSV");
    coverage->add_option("--json", cov_json, "optional JSON summary");
    coverage->add_flag("--per-replicate", per_replicate, "one CSV row per replicate");

    CLI11_PARSE(app, argc, argv);
    set_max_threads(threads);

    try {
        const nlohmann::json j = load_json_file(config_path);
        if (simulate->parsed()) {
            RunConfig cfg = run_config_from_json(j);
            if (have_seed_override) cfg.seed = seed_override;
            return cmd_simulate(cfg, sim_out);
        }
        if (fit->parsed()) {
            RunConfig cfg = run_config_from_json(j);
            if (have_seed_override) cfg.sir.seed = seed_override;
            return cmd_fit(cfg, fit_data, fit_samples, fit_diag, fit_intervals);
        }
        if (predict->parsed()) {
            RunConfig cfg = run_config_from_json(j);
            if (have_seed_override) cfg.seed = seed_override;
            return cmd_predict(cfg, pred_samples, pred_out);
        }
        if (robustness->parsed()) {
            RobustnessConfig cfg = robustness_config_from_json(j);
            if (have_seed_override) cfg.base_seed = seed_override;
            return cmd_robustness(cfg, rob_out, rob_json);
        }
        if (prior_sens->parsed()) {
            PriorSensitivityConfig cfg = prior_sensitivity_config_from_json(j);
            if (have_seed_override) cfg.base_seed = seed_override;
            return cmd_prior_sensitivity(cfg, ps_out, ps_json);
        }
        if (coverage->parsed()) {
            CoverageConfig cfg = coverage_config_from_json(j);
            if (have_seed_override) cfg.base_seed = seed_override;
            return cmd_coverage(cfg, cov_out, cov_json, per_replicate);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
