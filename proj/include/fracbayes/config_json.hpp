#ifndef FRACBAYES_CONFIG_JSON_HPP_
#define FRACBAYES_CONFIG_JSON_HPP_

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fracbayes/experiments.hpp"

namespace fracbayes {

// Ground truth block for simulation.
struct Truth {
    double alpha = 0.82;
    double sigma = 0.1;
};

// Settings for the predict subcommand.
struct PredictSpec {
    int draws_per_sample = 10;
    // Slice positions; empty means 3 evenly indexed grid lines per axis
    // (first, middle, last).
    std::vector<double> x_slices;
    std::vector<double> t_slices;
};

// Top-level CLI configuration.
struct RunConfig {
    std::uint64_t seed = 20260401;
    GridSpec grid;
    PriorSpec prior;
    SirConfig sir;
    SeriesConfig series;
    std::optional<Truth> truth;
    PredictSpec predict;
};

nlohmann::json load_json_file(const std::filesystem::path& path);

// Parsers throw ValidationError naming the offending field.
GridSpec grid_from_json(const nlohmann::json& j, const std::string& prefix = "grid");
PriorSpec prior_from_json(const nlohmann::json& j, const std::string& prefix = "prior");
SeriesConfig series_from_json(const nlohmann::json& j, const std::string& prefix = "series");
ProposalSpec proposal_from_json(const nlohmann::json& j, const std::string& prefix = "proposal");
SirConfig sir_from_json(const nlohmann::json& j, const std::string& prefix = "sir");
RunConfig run_config_from_json(const nlohmann::json& j);
RobustnessConfig robustness_config_from_json(const nlohmann::json& j);
PriorSensitivityConfig prior_sensitivity_config_from_json(const nlohmann::json& j);
CoverageConfig coverage_config_from_json(const nlohmann::json& j);

nlohmann::json diagnostics_to_json(const SirDiagnostics& d);
nlohmann::json interval_to_json(const std::string& parameter, const CredibleInterval& ci);

}  // namespace fracbayes

#endif  // FRACBAYES_CONFIG_JSON_HPP_
