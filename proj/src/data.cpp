#include "fracbayes/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fracbayes/rng.hpp"

namespace fracbayes {

void Dataset::validate() const {
    if (observations.empty()) throw ValidationError("empty dataset");
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const Observation& o = observations[i];
        if (!(o.x >= 0.0) || !(o.t >= 0.0) || !(o.p_obs > 0.0) || !std::isfinite(o.p_obs))
            throw ValidationError("invalid observation at index " + std::to_string(i));
    }
}

void GridSpec::validate() const {
    if (!(x_min < x_max)) throw ValidationError("grid.x_min must be < grid.x_max");
    if (!(t_min < t_max)) throw ValidationError("grid.t_min must be < grid.t_max");
    if (n_x < 1) throw ValidationError("grid.n_x must be >= 1");
    if (n_t < 1) throw ValidationError("grid.n_t must be >= 1");
    if (!(x_min >= 0.0)) throw ValidationError("grid.x_min must be >= 0");
    if (!(t_min >= 0.0)) throw ValidationError("grid.t_min must be >= 0");
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
    v.back() = hi;  // endpoint exact
    return v;
}

}  // namespace

std::vector<EvalPoint> make_grid(const GridSpec& spec) {
    spec.validate();
    const std::vector<double> xs = linspace(spec.x_min, spec.x_max, spec.n_x);
    const std::vector<double> ts = linspace(spec.t_min, spec.t_max, spec.n_t);
    std::vector<EvalPoint> points;
    points.reserve(xs.size() * ts.size());
    for (double x : xs)
        for (double t : ts) points.push_back(EvalPoint{x, t});
    return points;
}

Dataset simulate_dataset(const GridSpec& spec, FractionalOrder alpha, double sigma,
                         std::uint64_t seed, const SeriesConfig& cfg) {
    if (!(sigma > 0.0)) throw ValidationError("simulate_dataset requires sigma > 0");
    const std::vector<EvalPoint> points = make_grid(spec);
    const std::vector<double> ts = linspace(spec.t_min, spec.t_max, spec.n_t);
    const std::vector<double> s = series_factor_many(alpha, ts, cfg);

    Dataset out;
    out.observations.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t t_idx = i % static_cast<std::size_t>(spec.n_t);
        const double mu = std::exp(-points[i].x) * s[t_idx];
        const double z = CounterRng(seed, i).next_normal();
        out.observations.push_back(Observation{points[i].x, points[i].t, mu * std::exp(sigma * z)});
    }
    out.provenance = Provenance{alpha.value(), sigma, seed};
    return out;
}

namespace {

double parse_field(const std::string& field, const char* name, std::size_t row) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(std::string("non-numeric ") + name + " field '" + field + "'", row);
    return value;
}

}  // namespace

Dataset read_dataset(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw ValidationError("empty dataset");
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,t,p") throw ParseError("expected header 'x,t,p', got '" + line + "'", row);

    Dataset out;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw ParseError("expected three comma-separated fields", row);
        Observation o;
        o.x = parse_field(line.substr(0, c1), "x", row);
        o.t = parse_field(line.substr(c1 + 1, c2 - c1 - 1), "t", row);
        o.p_obs = parse_field(line.substr(c2 + 1), "p", row);
        if (!(o.p_obs > 0.0)) throw ParseError("non-positive pressure", row);
        if (!(o.x >= 0.0)) throw ParseError("negative x", row);
        if (!(o.t >= 0.0)) throw ParseError("negative t", row);
        out.observations.push_back(o);
    }
    if (out.observations.empty()) throw ValidationError("empty dataset");
    return out;
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset file: " + path.string());
    return read_dataset(in);
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
    dataset.validate();
    out << "x,t,p\n";
    char buf[96];
    for (const Observation& o : dataset.observations) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", o.x, o.t, o.p_obs);
        out << buf;
    }
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open output file: " + path.string());
    write_dataset(dataset, out);
    out.flush();
    if (!out) throw ValidationError("failed writing dataset to " + path.string());
}

}  // namespace fracbayes
