// End-to-end tests of the ghostsim executable.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* kBaseConfig =
    "sigma = 4\n"
    "omega = 50\n"
    "epsilon = 0.3\n"
    "z0 = 4\n"
    "lambda = 1\n"
    "L1 = 80\n"
    "L2 = 10\n";

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ghostsim_test_" + std::to_string(std::rand()) + "_" +
                std::to_string(std::chrono::steady_clock::now()
                                   .time_since_epoch()
                                   .count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(GHOSTSIM_BIN) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::pair<double, double>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "z2,intensity");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        rows.emplace_back(std::stod(line.substr(0, comma)),
                          std::stod(line.substr(comma + 1)));
    }
    return rows;
}

}  // namespace

TEST_CASE("pattern subcommand") {
    TempDir dir;
    const fs::path cfg = dir.path / "run.cfg";
    write_file(cfg, kBaseConfig);

    REQUIRE(run_cli("pattern --config " + cfg.string() + " --out " +
                    dir.path.string()) == 0);
    REQUIRE(fs::exists(dir.path / "pattern.csv"));
    REQUIRE(fs::exists(dir.path / "summary.json"));

    SUBCASE("zero overlap summary") {
        const json s = json::parse(read_file(dir.path / "summary.json"));
        CHECK(s.at("distinguishability").get<double>() == 1.0);
        CHECK(s.at("measured_visibility").get<double>() <= 1e-6);
        CHECK(s.at("duality_margin").get<double>() >= -1e-9);
        CHECK(s.at("pass_probability").get<double>() > 0.0);
        CHECK(s.at("pass_probability").get<double>() <= 1.0);
        CHECK(s.contains("peak_visibility"));
        CHECK(s.contains("fringe_spacing"));
        CHECK(s.contains("seed"));
    }

    SUBCASE("csv shape and determinism") {
        const auto rows = read_csv(dir.path / "pattern.csv");
        CHECK(rows.size() == 2048);
        const std::string first = read_file(dir.path / "pattern.csv");
        TempDir dir2;
        REQUIRE(run_cli("pattern --config " + cfg.string() + " --out " +
                        dir2.path.string()) == 0);
        CHECK(read_file(dir2.path / "pattern.csv") == first);
    }
}

TEST_CASE("eraser subcommand recombines to the fringeless pattern") {
    TempDir dir;
    const fs::path cfg = dir.path / "run.cfg";
    write_file(cfg, kBaseConfig);
    REQUIRE(run_cli("pattern --config " + cfg.string() + " --out " +
                    dir.path.string()) == 0);
    REQUIRE(run_cli("eraser --config " + cfg.string() + " --out " +
                    dir.path.string()) == 0);

    const auto base = read_csv(dir.path / "pattern.csv");
    const auto plus = read_csv(dir.path / "eraser_plus.csv");
    const auto minus = read_csv(dir.path / "eraser_minus.csv");
    REQUIRE(plus.size() == base.size());
    REQUIRE(minus.size() == base.size());
    double peak = 0.0;
    for (const auto& r : base) peak = std::max(peak, r.second);
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(plus[i].first == base[i].first);
        CHECK(std::abs(plus[i].second + minus[i].second - base[i].second) <=
              1e-12 * peak);
    }

    const json s = json::parse(read_file(dir.path / "summary.json"));
    CHECK(s.at("measured_visibility").get<double>() >= 0.99);
}

TEST_CASE("sweep subcommand") {
    TempDir dir;
    const fs::path cfg = dir.path / "run.cfg";
    write_file(cfg, std::string(kBaseConfig) +
                        "mode = sweep\n"
                        "sweep_key = overlap_magnitude\n"
                        "sweep_values = 0, 0.25, 0.5, 0.75, 1\n");
    REQUIRE(run_cli("sweep --config " + cfg.string() + " --out " +
                    dir.path.string() + " --workers 4") == 0);
    std::ifstream in(dir.path / "sweep.csv");
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line.rfind("index,overlap_magnitude,", 0) == 0);
    int n = 0;
    double prev = -1.0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string field;
        std::getline(row, field, ',');
        CHECK(std::stoi(field) == n);
        std::getline(row, field, ',');
        const double value = std::stod(field);
        CHECK(value > prev);
        prev = value;
        ++n;
    }
    CHECK(n == 5);
}

TEST_CASE("validate subcommand passes") {
    TempDir dir;
    const fs::path cfg = dir.path / "run.cfg";
    write_file(cfg,
               "sigma = 2\n"
               "omega = 10\n"
               "epsilon = 0.5\n"
               "z0 = 1.5\n"
               "lambda = 0.5\n"
               "L1 = 12\n"
               "L2 = 4\n");
    CHECK(run_cli("validate --config " + cfg.string()) == 0);
}

TEST_CASE("exit codes") {
    TempDir dir;

    SUBCASE("missing config file") {
        CHECK(run_cli("pattern --config " + (dir.path / "nope.cfg").string()) ==
              1);
    }

    SUBCASE("malformed config") {
        const fs::path cfg = dir.path / "bad.cfg";
        write_file(cfg, "sigma = 2\nbogus_key = 1\n");
        CHECK(run_cli("pattern --config " + cfg.string()) == 1);
    }

    SUBCASE("domain error") {
        const fs::path cfg = dir.path / "neg.cfg";
        write_file(cfg, std::string(kBaseConfig) + "overlap_magnitude = 2\n");
        CHECK(run_cli("pattern --config " + cfg.string() + " --out " +
                      dir.path.string()) == 2);
    }

    SUBCASE("usage error") {
        CHECK(run_cli("pattern") == 1);
        CHECK(run_cli("frobnicate") == 1);
    }
}
