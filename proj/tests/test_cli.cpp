#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bdp/charlier.hpp"
#include "bdp/transition.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "bdp");
    std::ostringstream out, err;
    const int code = bdp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string write_config(const std::string& name, const std::string& text) {
    const auto path = fs::temp_directory_path() / ("bdp_cli_" + name + ".json");
    std::ofstream(path) << text;
    return path.string();
}

const char* kConstant =
    R"({"lambda":{"kind":"constant","value":1.0},"mu":{"kind":"constant","value":0.5},"horizon":10})";
const char* kPureBirth =
    R"({"lambda":{"kind":"constant","value":1.0},"mu":{"kind":"constant","value":0.0},"horizon":10})";
const char* kSinusoid =
    R"({"lambda":{"kind":"sinusoid","base":1.0,"amp":0.5,"omega":6.283185307179586},"mu":{"kind":"constant","value":0.5},"horizon":10})";

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("format_double") {
    CHECK(bdp::cli::format_double(0.5) == "5.0000000000000000e-01");
    CHECK(bdp::cli::format_double(0.0) == "0.0000000000000000e+00");
    CHECK(bdp::cli::format_double(std::nan("")) == "nan");
}

TEST_CASE("transition prints JSON") {
    const auto cfg = write_config("const", kConstant);
    const auto r = run_cli({"transition", "--config", cfg, "--n", "5", "--m", "3", "--t", "1", "--method", "expr2"});
    REQUIRE(r.code == bdp::cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["method"] == "expr2");
    CHECK(j["n"] == 5);
    CHECK(j["m"] == 3);
    CHECK(j["probability"].get<double>() == doctest::Approx(0.248135835995736).epsilon(1e-12));
    CHECK(j["alpha_spectral"].get<double>() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(j["g_functions"]["g4"].get<double>() == -0.5);
    CHECK(j["truncation_diagnostics"]["abs_tol"].get<double>() == 1e-12);
    CHECK(j["truncation_diagnostics"]["x_max"].get<int>() > 0);
    // byte-identical reruns
    CHECK(run_cli({"transition", "--config", cfg, "--n", "5", "--m", "3", "--t", "1", "--method", "expr2"}).out ==
          r.out);
}

TEST_CASE("transition methods agree through the CLI") {
    const auto cfg = write_config("const", kConstant);
    double ref = -1.0;
    for (const char* method : {"expr1", "expr2", "km", "oracle", "best"}) {
        const auto r = run_cli({"transition", "--config", cfg, "--n", "4", "--m", "2", "--t", "0.8", "--method", method});
        REQUIRE(r.code == 0);
        const double p = nlohmann::json::parse(r.out)["probability"].get<double>();
        if (ref < 0) ref = p;
        CHECK(std::abs(p - ref) <= 1e-10);
    }
}

TEST_CASE("degenerate expr2 exits with code 2") {
    const auto cfg = write_config("birth", kPureBirth);
    const auto r = run_cli({"transition", "--config", cfg, "--n", "1", "--m", "1", "--t", "1", "--method", "expr2"});
    CHECK(r.code == bdp::cli::kDegenerate);
    CHECK(r.out.empty());
    CHECK_FALSE(r.err.empty());
    const auto best = run_cli({"transition", "--config", cfg, "--n", "1", "--m", "1", "--t", "1"});
    REQUIRE(best.code == 0);
    const auto j = nlohmann::json::parse(best.out);
    CHECK(j["method"] == "expr1");
    CHECK(j["alpha_spectral"].is_null());
}

TEST_CASE("malformed config exits with code 1 and no output") {
    const auto cfg = write_config("broken", R"({"lambda": )");
    const auto r = run_cli({"transition", "--config", cfg, "--n", "1", "--m", "1", "--t", "1"});
    CHECK(r.code == bdp::cli::kConfigError);
    CHECK(r.out.empty());
    const auto unknown = write_config(
        "unknown", R"({"lambda":{"kind":"constant","value":1},"mu":{"kind":"constant","value":1},"horizon":1,"beta":0})");
    const auto u = run_cli({"matrix", "--config", unknown, "--n", "1", "--t", "0.5"});
    CHECK(u.code == bdp::cli::kConfigError);
    CHECK(u.err.find("beta") != std::string::npos);
    CHECK(run_cli({"transition", "--config", "/nonexistent/cfg.json", "--n", "1", "--m", "1", "--t", "1"}).code ==
          bdp::cli::kConfigError);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli({}).code == bdp::cli::kConfigError);
    CHECK(run_cli({"frobnicate"}).code == bdp::cli::kConfigError);
    const auto cfg = write_config("const", kConstant);
    CHECK(run_cli({"transition", "--config", cfg, "--n", "1", "--m", "1", "--t", "1", "--method", "expr9"}).code ==
          bdp::cli::kConfigError);
    CHECK(run_cli({"transition", "--config", cfg, "--n", "1", "--m", "1", "--t", "50"}).code ==
          bdp::cli::kConfigError);
}

TEST_CASE("matrix row sums to one") {
    const auto cfg = write_config("sin", kSinusoid);
    const auto r = run_cli({"matrix", "--config", cfg, "--n", "3", "--t", "1.5", "--method", "expr2"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == std::vector<std::string>{"m", "probability"});
    double total = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stoul(rows[i][0]) == i - 1);
        total += std::stod(rows[i][1]);
    }
    CHECK(std::abs(total - 1.0) <= 1e-8);
}

TEST_CASE("gfuncs table") {
    const auto cfg = write_config("const", kConstant);
    for (const char* solver : {"closed", "ode"}) {
        const auto r = run_cli({"gfuncs", "--config", cfg, "--t-grid", "0:2:0.5", "--solver", solver});
        REQUIRE(r.code == 0);
        const auto rows = csv_rows(r.out);
        REQUIRE(rows.size() == 6);
        CHECK(rows[0] == std::vector<std::string>{"t", "g1", "g2", "g3", "g4", "p", "nu", "alpha"});
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double t = std::stod(rows[i][0]);
            CHECK(std::abs(std::stod(rows[i][4]) + 0.5 * t) <= 1e-12);
        }
        // alpha is undefined at t = 0
        CHECK(rows[1][7] == "nan");
    }
}

TEST_CASE("charlier table is symmetric under duality") {
    const auto r = run_cli({"charlier", "--alpha", "1.5", "--n-max", "6", "--x-max", "6"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1 + 49);
    double table[7][7];
    for (std::size_t i = 1; i < rows.size(); ++i) {
        table[std::stoi(rows[i][0])][std::stoi(rows[i][1])] = std::stod(rows[i][2]);
    }
    for (int n = 0; n <= 6; ++n) {
        for (int x = 0; x <= 6; ++x) {
            CHECK(std::abs(table[n][x] - table[x][n]) <= 1e-9 * std::max(1.0, std::abs(table[n][x])));
            CHECK(table[n][x] == doctest::Approx(bdp::charlier_eval(n, x, 1.5)));
        }
    }
    CHECK(run_cli({"charlier", "--alpha", "0", "--n-max", "2", "--x-max", "2"}).code == bdp::cli::kConfigError);
}

TEST_CASE("oracle and simulate") {
    const auto cfg = write_config("const", kConstant);
    const auto o = run_cli({"oracle", "--config", cfg, "--n0", "0", "--t", "2"});
    REQUIRE(o.code == 0);
    const auto orows = csv_rows(o.out);
    CHECK(orows[0] == std::vector<std::string>{"state", "probability"});
    CHECK(std::stod(orows[1][1]) == doctest::Approx(std::exp(-2.0 * (1.0 - std::exp(-1.0)))).epsilon(1e-10));

    const std::vector<std::string> sim = {"simulate", "--config", cfg, "--n0", "3", "--t", "2", "--n-traj", "2000",
                                          "--seed", "7"};
    const auto s1 = run_cli(sim);
    REQUIRE(s1.code == 0);
    CHECK(csv_rows(s1.out)[0] == std::vector<std::string>{"state", "prob", "stderr"});
    auto sim_workers = sim;
    sim_workers.insert(sim_workers.end(), {"--workers", "3"});
    CHECK(run_cli(sim_workers).out == s1.out);
}

TEST_CASE("validate reports pass and fails at zero tolerance") {
    const auto cfg = write_config(
        "pair", std::string(R"({"profiles":[)") + kConstant + "," + kSinusoid + "]}");
    const auto ok = run_cli({"validate", "--config", cfg, "--n-max", "6", "--m-max", "6", "--times", "0.5,1.5"});
    CHECK(ok.code == 0);
    const auto rows = csv_rows(ok.out);
    CHECK(rows[0] == std::vector<std::string>{"profile", "pair", "max_abs_diff", "tolerance", "status"});
    // constant profile: three pairs; sinusoid: km is skipped
    CHECK(rows.size() == 1 + 3 + 2);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][4] == "pass");

    const auto strict = run_cli({"validate", "--config", cfg, "--n-max", "6", "--m-max", "6", "--tol", "0"});
    CHECK(strict.code == bdp::cli::kNumericalFailure);
    CHECK(strict.out.find("fail") != std::string::npos);
}

TEST_CASE("BD_DEFAULT_TOL sets the truncation tolerance") {
    const auto cfg = write_config("const", kConstant);
    ::setenv("BD_DEFAULT_TOL", "1e-6", 1);
    const auto r = run_cli({"transition", "--config", cfg, "--n", "2", "--m", "2", "--t", "1", "--method", "km"});
    ::setenv("BD_DEFAULT_TOL", "bogus", 1);
    const auto bad = run_cli({"transition", "--config", cfg, "--n", "2", "--m", "2", "--t", "1", "--method", "km"});
    ::unsetenv("BD_DEFAULT_TOL");
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["truncation_diagnostics"]["abs_tol"].get<double>() == 1e-6);
    CHECK(bad.code == bdp::cli::kConfigError);
    // an explicit --tol wins over the environment
    ::setenv("BD_DEFAULT_TOL", "1e-6", 1);
    const auto flag = run_cli(
        {"transition", "--config", cfg, "--n", "2", "--m", "2", "--t", "1", "--method", "km", "--tol", "1e-11"});
    ::unsetenv("BD_DEFAULT_TOL");
    REQUIRE(flag.code == 0);
    CHECK(nlohmann::json::parse(flag.out)["truncation_diagnostics"]["abs_tol"].get<double>() == 1e-11);
}
