// End-to-end checks of the fracbayes binary: file formats, exit codes, and
// byte-level reproducibility across runs and thread counts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return FRACBAYES_CLI_PATH; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fracbayes_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n' ? 1 : 0;
    return n;
}

const char* kFitConfig = R"({
  "seed": 424242,
  "truth": {"alpha": 0.82, "sigma": 0.1},
  "sir": {"n_c": 2000, "n_s": 400, "seed": 5,
          "proposal": {"kind": "adaptive_pilot", "pilot_size": 600}}
})";

}  // namespace

TEST_CASE("simulate writes the default 341-row dataset byte-identically") {
    TempDir dir;
    write_file(dir.path / "cfg.json", kFitConfig);
    const std::string base = "simulate --config " + (dir.path / "cfg.json").string();

    REQUIRE(run(base + " --out " + (dir.path / "a.csv").string()) == 0);
    REQUIRE(run(base + " --out " + (dir.path / "b.csv").string()) == 0);

    const std::string a = slurp(dir.path / "a.csv");
    CHECK(count_lines(a) == 342);  // header + 341 observations
    CHECK(a.substr(0, 6) == "x,t,p\n");
    CHECK(a == slurp(dir.path / "b.csv"));
}

TEST_CASE("simulate without a truth block fails loudly") {
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({"seed": 1})");
    CHECK(run("simulate --config " + (dir.path / "cfg.json").string() + " --out " +
              (dir.path / "x.csv").string()) != 0);
}

TEST_CASE("bad config fields are rejected by name") {
    TempDir dir;
    write_file(dir.path / "cfg.json", R"({"grid": {"n_x": "many"}})");
    const std::string cmd = std::string(cli_path()) + " simulate --config " +
                            (dir.path / "cfg.json").string() + " 2> " +
                            (dir.path / "err.txt").string();
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) != 0);
    const std::string err = slurp(dir.path / "err.txt");
    CHECK(err.find("grid.n_x") != std::string::npos);
}

TEST_CASE("fit then predict round trip") {
    TempDir dir;
    write_file(dir.path / "cfg.json", kFitConfig);
    const std::string cfg = (dir.path / "cfg.json").string();

    REQUIRE(run("simulate --config " + cfg + " --out " + (dir.path / "data.csv").string()) == 0);
    REQUIRE(run("fit --config " + cfg + " --data " + (dir.path / "data.csv").string() +
                " --out-samples " + (dir.path / "samples.csv").string() + " --out-diag " +
                (dir.path / "diag.json").string() + " --out-intervals " +
                (dir.path / "iv.json").string()) == 0);

    const std::string samples = slurp(dir.path / "samples.csv");
    CHECK(count_lines(samples) == 401);  // header + n_s rows
    CHECK(samples.substr(0, 13) == "alpha,sigma2\n");

    const std::string diag = slurp(dir.path / "diag.json");
    CHECK(diag.find("unique_fraction") != std::string::npos);
    CHECK(diag.find("ess") != std::string::npos);
    CHECK(diag.find("max_weight") != std::string::npos);
    CHECK(diag.find("n_finite_weights") != std::string::npos);

    const std::string iv = slurp(dir.path / "iv.json");
    CHECK(iv.find("\"parameter\": \"alpha\"") != std::string::npos);
    CHECK(iv.find("\"level\": 0.95") != std::string::npos);

    REQUIRE(run("predict --config " + cfg + " --samples " +
                (dir.path / "samples.csv").string() + " --out " +
                (dir.path / "profiles.csv").string()) == 0);
    std::ifstream profiles(dir.path / "profiles.csv");
    std::string line;
    REQUIRE(std::getline(profiles, line));
    CHECK(line == "fixed_label,fixed_value,coord,q025,q50,q975");
    int rows = 0;
    int x_rows = 0, t_rows = 0;
    while (std::getline(profiles, line)) {
        ++rows;
        REQUIRE(!line.empty());
        if (line[0] == 'x') ++x_rows;
        if (line[0] == 't') ++t_rows;
        // q025 <= q50 <= q975 on every row.
        std::stringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        std::getline(ss, field, ',');
        std::getline(ss, field, ',');
        std::getline(ss, field, ',');
        const double q025 = std::stod(field);
        std::getline(ss, field, ',');
        const double q50 = std::stod(field);
        std::getline(ss, field, ',');
        const double q975 = std::stod(field);
        CHECK(q025 <= q50);
        CHECK(q50 <= q975);
        CHECK(q025 > 0.0);
    }
    // 3 x-slices across 11 times + 3 t-slices across 31 x-levels.
    CHECK(x_rows == 33);
    CHECK(t_rows == 93);
    CHECK(rows == 126);
}

TEST_CASE("fit artifacts are byte-identical across thread counts") {
    TempDir dir;
    write_file(dir.path / "cfg.json", kFitConfig);
    const std::string cfg = (dir.path / "cfg.json").string();
    REQUIRE(run("simulate --config " + cfg + " --out " + (dir.path / "data.csv").string()) == 0);
    for (int threads : {1, 2, 4}) {
        REQUIRE(run("fit --threads " + std::to_string(threads) + " --config " + cfg +
                    " --data " + (dir.path / "data.csv").string() + " --out-samples " +
                    (dir.path / ("s" + std::to_string(threads) + ".csv")).string() +
                    " --out-diag " +
                    (dir.path / ("d" + std::to_string(threads) + ".json")).string()) == 0);
    }
    CHECK(slurp(dir.path / "s1.csv") == slurp(dir.path / "s2.csv"));
    CHECK(slurp(dir.path / "s1.csv") == slurp(dir.path / "s4.csv"));
    CHECK(slurp(dir.path / "d1.json") == slurp(dir.path / "d4.json"));
}

TEST_CASE("corrupted dataset fails with the row number") {
    TempDir dir;
    write_file(dir.path / "cfg.json", kFitConfig);
    write_file(dir.path / "bad.csv", "x,t,p\n1.0,0.5,2.0\n1.0,oops,2.0\n");
    const std::string cmd = std::string(cli_path()) + " fit --config " +
                            (dir.path / "cfg.json").string() + " --data " +
                            (dir.path / "bad.csv").string() + " 2> " +
                            (dir.path / "err.txt").string();
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) != 0);
    const std::string err = slurp(dir.path / "err.txt");
    CHECK(err.find("row 3") != std::string::npos);
}

TEST_CASE("one-row dataset still fits") {
    TempDir dir;
    write_file(dir.path / "cfg.json", kFitConfig);
    write_file(dir.path / "one.csv", "x,t,p\n1.0,1.0,2.5\n");
    CHECK(run("fit --config " + (dir.path / "cfg.json").string() + " --data " +
              (dir.path / "one.csv").string() + " --out-samples " +
              (dir.path / "s.csv").string() + " --out-diag " +
              (dir.path / "d.json").string()) == 0);
    CHECK(count_lines(slurp(dir.path / "s.csv")) == 401);
}

TEST_CASE("coverage m=1 emits indicator coverage values") {
    TempDir dir;
    write_file(dir.path / "cov.json", R"({
      "m": 1, "alphas": [0.5], "sigmas": [0.1], "base_seed": 9,
      "grid": {"n_x": 11, "n_t": 5},
      "sir": {"n_c": 1500, "n_s": 300, "proposal": {"pilot_size": 500}}
    })");
    REQUIRE(run("coverage --config " + (dir.path / "cov.json").string() + " --out " +
                (dir.path / "cov.csv").string()) == 0);
    std::ifstream in(dir.path / "cov.csv");
    std::string header, row;
    REQUIRE(std::getline(in, header));
    CHECK(header == "alpha_true,sigma_true,m,coverage_alpha,coverage_sigma,n_degenerate");
    REQUIRE(std::getline(in, row));
    std::stringstream ss(row);
    std::string field;
    std::getline(ss, field, ',');
    std::getline(ss, field, ',');
    std::getline(ss, field, ',');
    CHECK(field == "1");
    std::getline(ss, field, ',');
    const double cov_a = std::stod(field);
    CHECK((cov_a == 0.0 || cov_a == 1.0));
}

TEST_CASE("robustness subcommand writes one row per cell") {
    TempDir dir;
    write_file(dir.path / "rob.json", R"({
      "alphas": [0.3, 0.7], "sigmas": [0.1], "base_seed": 11,
      "grid": {"n_x": 11, "n_t": 5},
      "sir": {"n_c": 1500, "n_s": 300, "proposal": {"pilot_size": 500}}
    })");
    REQUIRE(run("robustness --config " + (dir.path / "rob.json").string() + " --out " +
                (dir.path / "rob.csv").string() + " --json " +
                (dir.path / "rob_summary.json").string()) == 0);
    CHECK(count_lines(slurp(dir.path / "rob.csv")) == 3);  // header + 2 cells
    CHECK(slurp(dir.path / "rob_summary.json").find("n_contain_both") != std::string::npos);
}

TEST_CASE("unknown proposal kind is a config error") {
    TempDir dir;
    write_file(dir.path / "cfg.json",
               R"({"sir": {"proposal": {"kind": "metropolis"}}, "truth": {"alpha": 0.5, "sigma": 0.1}})");
    CHECK(run("simulate --config " + (dir.path / "cfg.json").string()) != 0);
}
