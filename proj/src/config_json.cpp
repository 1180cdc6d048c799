#include "fracbayes/config_json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace fracbayes {

namespace {

using nlohmann::json;

[[noreturn]] void bad_field(const std::string& name, const std::string& why) {
    throw ValidationError("config field '" + name + "' " + why);
}

double get_number(const json& j, const std::string& key, const std::string& prefix,
                  double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) bad_field(prefix + "." + key, "must be a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& prefix, int fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) bad_field(prefix + "." + key, "must be an integer");
    return v.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key, const std::string& prefix,
                      std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_unsigned() && !v.is_number_integer())
        bad_field(prefix + "." + key, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& key, const std::string& prefix, bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_boolean()) bad_field(prefix + "." + key, "must be a boolean");
    return v.get<bool>();
}

std::vector<double> get_number_list(const json& j, const std::string& key,
                                    const std::string& prefix, std::vector<double> fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array()) bad_field(prefix + "." + key, "must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) bad_field(prefix + "." + key, "must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ValidationError("config root must be a JSON object");
    return j;
}

GridSpec grid_from_json(const nlohmann::json& j, const std::string& prefix) {
    GridSpec g;
    g.x_min = get_number(j, "x_min", prefix, g.x_min);
    g.x_max = get_number(j, "x_max", prefix, g.x_max);
    g.n_x = get_int(j, "n_x", prefix, g.n_x);
    g.t_min = get_number(j, "t_min", prefix, g.t_min);
    g.t_max = get_number(j, "t_max", prefix, g.t_max);
    g.n_t = get_int(j, "n_t", prefix, g.n_t);
    g.validate();
    return g;
}

PriorSpec prior_from_json(const nlohmann::json& j, const std::string& prefix) {
    PriorSpec p;
    p.alpha_star = get_number(j, "alpha_star", prefix, p.alpha_star);
    p.beta_star = get_number(j, "beta_star", prefix, p.beta_star);
    p.df = get_number(j, "df", prefix, p.df);
    p.include_sigma2_kernel = get_bool(j, "include_sigma2_kernel", prefix, p.include_sigma2_kernel);
    p.validate();
    return p;
}

SeriesConfig series_from_json(const nlohmann::json& j, const std::string& prefix) {
    SeriesConfig s;
    s.rel_tol = get_number(j, "rel_tol", prefix, s.rel_tol);
    s.k_min = get_int(j, "k_min", prefix, s.k_min);
    s.k_max = get_int(j, "k_max", prefix, s.k_max);
    s.validate();
    return s;
}

ProposalSpec proposal_from_json(const nlohmann::json& j, const std::string& prefix) {
    ProposalSpec p;
    if (j.contains("kind")) {
        if (!j.at("kind").is_string()) bad_field(prefix + ".kind", "must be a string");
        std::string kind = j.at("kind").get<std::string>();
        std::transform(kind.begin(), kind.end(), kind.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        kind.erase(std::remove(kind.begin(), kind.end(), '_'), kind.end());
        if (kind == "prior")
            p.kind = ProposalKind::Prior;
        else if (kind == "uniformbox")
            p.kind = ProposalKind::UniformBox;
        else if (kind == "adaptivepilot")
            p.kind = ProposalKind::AdaptivePilot;
        else
            bad_field(prefix + ".kind", "must be one of prior, uniform_box, adaptive_pilot");
    }
    if (j.contains("box")) {
        const json& b = j.at("box");
        if (!b.is_object()) bad_field(prefix + ".box", "must be an object");
        ProposalBox box;
        box.alpha_lo = get_number(b, "alpha_lo", prefix + ".box", box.alpha_lo);
        box.alpha_hi = get_number(b, "alpha_hi", prefix + ".box", box.alpha_hi);
        box.sigma2_lo = get_number(b, "sigma2_lo", prefix + ".box", box.sigma2_lo);
        box.sigma2_hi = get_number(b, "sigma2_hi", prefix + ".box", box.sigma2_hi);
        p.box = box;
    }
    p.pilot_size = get_int(j, "pilot_size", prefix, p.pilot_size);
    p.inflation = get_number(j, "inflation", prefix, p.inflation);
    p.validate();
    return p;
}

SirConfig sir_from_json(const nlohmann::json& j, const std::string& prefix) {
    SirConfig s;
    s.n_c = get_int(j, "n_c", prefix, s.n_c);
    s.n_s = get_int(j, "n_s", prefix, s.n_s);
    s.seed = get_u64(j, "seed", prefix, s.seed);
    if (j.contains("proposal")) {
        if (!j.at("proposal").is_object()) bad_field(prefix + ".proposal", "must be an object");
        s.proposal = proposal_from_json(j.at("proposal"), prefix + ".proposal");
    }
    s.validate();
    return s;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.seed = get_u64(j, "seed", "", cfg.seed);
    if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
    if (j.contains("prior")) cfg.prior = prior_from_json(j.at("prior"));
    if (j.contains("sir")) cfg.sir = sir_from_json(j.at("sir"));
    if (j.contains("series")) cfg.series = series_from_json(j.at("series"));
    if (j.contains("truth")) {
        const json& t = j.at("truth");
        if (!t.is_object()) bad_field("truth", "must be an object");
        Truth truth;
        if (!t.contains("alpha")) bad_field("truth.alpha", "is required");
        if (!t.contains("sigma")) bad_field("truth.sigma", "is required");
        truth.alpha = get_number(t, "alpha", "truth", truth.alpha);
        truth.sigma = get_number(t, "sigma", "truth", truth.sigma);
        if (!(truth.alpha > 0.0 && truth.alpha <= 1.0))
            bad_field("truth.alpha", "must lie in (0, 1]");
        if (!(truth.sigma > 0.0)) bad_field("truth.sigma", "must be > 0");
        cfg.truth = truth;
    }
    if (j.contains("predict")) {
        const json& p = j.at("predict");
        if (!p.is_object()) bad_field("predict", "must be an object");
        cfg.predict.draws_per_sample = get_int(p, "draws_per_sample", "predict", 10);
        if (cfg.predict.draws_per_sample < 1)
            bad_field("predict.draws_per_sample", "must be >= 1");
        cfg.predict.x_slices = get_number_list(p, "x_slices", "predict", {});
        cfg.predict.t_slices = get_number_list(p, "t_slices", "predict", {});
    }
    return cfg;
}

RobustnessConfig robustness_config_from_json(const nlohmann::json& j) {
    RobustnessConfig cfg;
    cfg.alphas = get_number_list(j, "alphas", "", cfg.alphas);
    cfg.sigmas = get_number_list(j, "sigmas", "", cfg.sigmas);
    cfg.base_seed = get_u64(j, "base_seed", "", cfg.base_seed);
    if (j.contains("sir")) cfg.sir = sir_from_json(j.at("sir"));
    if (j.contains("prior")) cfg.prior = prior_from_json(j.at("prior"));
    if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
    if (j.contains("series")) cfg.series = series_from_json(j.at("series"));
    cfg.validate();
    return cfg;
}

PriorSensitivityConfig prior_sensitivity_config_from_json(const nlohmann::json& j) {
    PriorSensitivityConfig cfg;
    cfg.shape_values = get_number_list(j, "shape_values", "", cfg.shape_values);
    cfg.alpha_true = get_number(j, "alpha_true", "", cfg.alpha_true);
    cfg.sigma_true = get_number(j, "sigma_true", "", cfg.sigma_true);
    cfg.df = get_number(j, "df", "", cfg.df);
    cfg.base_seed = get_u64(j, "base_seed", "", cfg.base_seed);
    if (j.contains("sir")) cfg.sir = sir_from_json(j.at("sir"));
    if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
    if (j.contains("series")) cfg.series = series_from_json(j.at("series"));
    cfg.validate();
    return cfg;
}

CoverageConfig coverage_config_from_json(const nlohmann::json& j) {
    CoverageConfig cfg;
    cfg.m = get_int(j, "m", "", cfg.m);
    cfg.alphas = get_number_list(j, "alphas", "", cfg.alphas);
    cfg.sigmas = get_number_list(j, "sigmas", "", cfg.sigmas);
    cfg.base_seed = get_u64(j, "base_seed", "", cfg.base_seed);
    if (j.contains("sir")) cfg.sir = sir_from_json(j.at("sir"));
    if (j.contains("prior")) cfg.prior = prior_from_json(j.at("prior"));
    if (j.contains("grid")) cfg.grid = grid_from_json(j.at("grid"));
    if (j.contains("series")) cfg.series = series_from_json(j.at("series"));
    cfg.validate();
    return cfg;
}

nlohmann::json diagnostics_to_json(const SirDiagnostics& d) {
    return nlohmann::json{{"unique_fraction", d.unique_fraction},
                          {"ess", d.ess},
                          {"max_weight", d.max_weight},
                          {"n_finite_weights", d.n_finite_weights},
                          {"pilot_stages", d.pilot_stages}};
}

nlohmann::json interval_to_json(const std::string& parameter, const CredibleInterval& ci) {
    return nlohmann::json{
        {"parameter", parameter}, {"lo", ci.lo}, {"hi", ci.hi}, {"level", ci.level}};
}

}  // namespace fracbayes
