#ifndef FRACBAYES_DATA_HPP_
#define FRACBAYES_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fracbayes/solution.hpp"

namespace fracbayes {

struct Observation {
    double x = 0.0;
    double t = 0.0;
    double p_obs = 0.0;  // observed pressure, > 0
};

// How a simulated dataset was produced; absent for external data.
struct Provenance {
    double alpha_true = 0.0;
    double sigma_true = 0.0;
    std::uint64_t seed = 0;
};

struct Dataset {
    std::vector<Observation> observations;
    std::optional<Provenance> provenance;

    void validate() const;
};

// Regular space-time design; defaults reproduce the simulated example
// (31 x-levels from 0.01 to 10, 11 times from 0.5 to 1.5).
struct GridSpec {
    double x_min = 0.01;
    double x_max = 10.0;
    int n_x = 31;
    double t_min = 0.5;
    double t_max = 1.5;
    int n_t = 11;

    void validate() const;
};

// Cartesian product of equally spaced x and t values, x-major order,
// endpoints included exactly.
std::vector<EvalPoint> make_grid(const GridSpec& spec);

// Noisy observations p_obs = mu(x,t;alpha) * exp(sigma * z) with z standard
// normal; ln(noise) ~ Normal(0, sigma^2), so the noise has unit median.
// The normal draw for observation i comes from stream i of `seed`, so grids
// of different sizes share their leading draws.
Dataset simulate_dataset(const GridSpec& spec, FractionalOrder alpha, double sigma,
                         std::uint64_t seed, const SeriesConfig& cfg = {});

// CSV persistence.  Header `x,t,p`, one observation per row, 17 significant
// digits so read(write(d)) reproduces every double exactly.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const Dataset& dataset, std::ostream& out);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace fracbayes

#endif  // FRACBAYES_DATA_HPP_
