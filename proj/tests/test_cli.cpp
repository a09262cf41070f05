#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oneway/model.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int code = -1;
    std::string out;
};

/// Run the installed binary with the given argument string, capturing stdout.
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ONEWAY_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() /
                       ("owcli_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) rows.push_back(split(line, ','));
    return rows;
}

json read_json(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    return json::parse(is);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

const char* kA1 = "--alphas 2,1,2 --rhos 0.3333333333333333,0.6666666666666666";

}  // namespace

TEST_CASE("cli: spectrum table for a constant profile") {
    const auto dir = fresh_dir("spectrum");
    const auto r = run_cli("spectrum --alphas 2 --terms 5 --out " + dir.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("spectrum.csv") != std::string::npos);

    const auto rows = read_csv(dir / "spectrum.csv");
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] ==
          std::vector<std::string>{"j", "lambda", "sign_lambda", "omega_n_re",
                                   "omega_n_im", "secant_iters", "det_residual"});
    const double lam_want[5] = {3.0, 0.0, -5.0, -12.0, -21.0};
    for (int j = 1; j <= 5; ++j) {
        const auto& row = rows[static_cast<std::size_t>(j)];
        REQUIRE(row.size() == 7);
        CHECK(std::stoi(row[0]) == j);
        CHECK(std::abs(std::stod(row[1]) - lam_want[j - 1]) < 1e-9);
        CHECK(std::abs(std::stod(row[3]) - j) < 1e-9);
        CHECK(std::abs(std::stod(row[4])) < 1e-9);
        CHECK(std::stoi(row[5]) >= 0);
        CHECK(std::stod(row[6]) < 1e-8);
    }
    CHECK(std::stoi(rows[1][2]) == 1);   // lambda_1 = 3 propagates
    CHECK(std::stoi(rows[3][2]) == -1);  // lambda_3 = -5 is evanescent
    CHECK(std::stoi(rows[5][2]) == -1);
}

TEST_CASE("cli: solve emits grid values and a summary") {
    const auto dir = fresh_dir("solve_const");
    const auto r = run_cli(
        "solve --alphas 2 --ic sine:2 --rf 0.7 --N 63 --nref 1023 --out " +
        dir.string());
    CHECK(r.code == 0);

    const auto rows = read_csv(dir / "solution.csv");
    REQUIRE(rows.size() == 64);
    CHECK(rows[0] == std::vector<std::string>{"z", "re_u", "im_u", "abs_u"});
    const double h = oneway::kPi / 64.0;
    for (int i = 1; i <= 63; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        REQUIRE(row.size() == 4);
        CHECK(std::abs(std::stod(row[0]) - i * h) < 1e-12);
        // the j=2 mode is range-neutral up to the root solve's residual
        CHECK(std::abs(std::stod(row[3]) - std::abs(std::sin(2.0 * i * h))) < 1e-5);
        CHECK(std::abs(std::stod(row[1]) - std::sin(2.0 * i * h)) < 1e-4);
    }

    const json summary = read_json(dir / "summary.json");
    CHECK(summary.at("method") == "eigexp");
    CHECK(summary.at("N") == 63);
    CHECK(summary.at("r_f").get<double>() == doctest::Approx(0.7));
    CHECK(summary.at("terms") == 2);
    CHECK(summary.at("wall_time_ms").get<double>() > 0.0);
    REQUIRE(summary.contains("error_vs_reference"));
    CHECK(summary.at("error_vs_reference").get<double>() < 1e-2);
}

TEST_CASE("cli: smooth data truncates to a short expansion") {
    const auto dir = fresh_dir("solve_a1");
    const auto r = run_cli(std::string("solve ") + kA1 +
                           " --ic sine:2 --rf 1 --N 127 --nref 1023 --out " +
                           dir.string());
    CHECK(r.code == 0);
    const json summary = read_json(dir / "summary.json");
    const int terms = summary.at("terms").get<int>();
    // +-50% window around the frozen benchmark count (14) for this cell
    CHECK(terms >= 7);
    CHECK(terms <= 21);
    CHECK(summary.at("error_vs_reference").get<double>() < 1e-2);
}

TEST_CASE("cli: compare grid is sorted and complete") {
    const auto dir = fresh_dir("compare");
    // ranges and grids deliberately given out of order
    const auto r = run_cli(
        std::string("compare ") + kA1 +
        " --ic char:0.7853981633974483,1.5707963267948966" +
        " --rf 1,0.1 --N 255,127 --nref 1023 --out " + dir.string());
    CHECK(r.code == 0);

    const auto rows = read_csv(dir / "compare.csv");
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"r_f", "N", "eigexp_terms",
                                              "eigexp_error", "schur_error"});
    const double rf_want[4] = {0.1, 0.1, 1.0, 1.0};
    const int n_want[4] = {127, 255, 127, 255};
    for (int k = 0; k < 4; ++k) {
        const auto& row = rows[static_cast<std::size_t>(k + 1)];
        REQUIRE(row.size() == 5);
        CHECK(std::stod(row[0]) == doctest::Approx(rf_want[k]));
        CHECK(std::stoi(row[1]) == n_want[k]);
        CHECK(std::stoi(row[2]) >= 1);
        for (int c : {3, 4}) {
            REQUIRE(!row[static_cast<std::size_t>(c)].empty());
            const double err = std::stod(row[static_cast<std::size_t>(c)]);
            CHECK(err > 0.0);
            CHECK(err < 0.5);
        }
    }

    const json cmp = read_json(dir / "compare.json");
    REQUIRE(cmp.at("rows").size() == 4);
    for (const auto& cell : cmp.at("rows")) {
        CHECK(cell.at("eigexp_wall_time_ms").get<double>() > 0.0);
        CHECK(cell.at("schur_wall_time_ms").get<double>() > 0.0);
        CHECK(cell.contains("eigexp_error"));
        CHECK(cell.contains("schur_error"));
    }
}

TEST_CASE("cli: first-column decay diagnostics") {
    SUBCASE("symmetric three-piece profile") {
        const auto dir = fresh_dir("decay_a1");
        const auto r =
            run_cli(std::string("decay ") + kA1 + " --N 127 --out " + dir.string());
        CHECK(r.code == 0);
        const auto rows = read_csv(dir / "decay.csv");
        REQUIRE(rows.size() == 128);
        CHECK(rows[0] == std::vector<std::string>{"row_index", "abs_entry"});

        const json d = read_json(dir / "decay.json");
        const int nonzero = d.at("nonzero_entries").get<int>();
        CHECK(nonzero >= 60);
        CHECK(nonzero <= 64);
        CHECK(d.at("alternating_zeros").get<bool>());
        CHECK_FALSE(d.at("degenerate").get<bool>());
        REQUIRE(!d.at("slope").is_null());
        const double slope = d.at("slope").get<double>();
        CHECK(slope <= -2.4);
        CHECK(slope >= -3.6);
    }
    SUBCASE("constant profile is degenerate") {
        const auto dir = fresh_dir("decay_const");
        const auto r = run_cli("decay --alphas 2 --N 63 --out " + dir.string());
        CHECK(r.code == 0);
        const json d = read_json(dir / "decay.json");
        CHECK(d.at("nonzero_entries").get<int>() == 1);
        CHECK_FALSE(d.at("alternating_zeros").get<bool>());
        CHECK(d.at("degenerate").get<bool>());
        CHECK(d.at("slope").is_null());
    }
}

TEST_CASE("cli: repeated runs are byte-identical") {
    const auto dir_a = fresh_dir("det_a");
    const auto dir_b = fresh_dir("det_b");
    const std::string tail =
        std::string(" ") + kA1 +
        " --ic char:0.7853981633974483,1.5707963267948966"
        " --rf 0.5 --N 127 --nref 255 --out ";
    CHECK(run_cli("solve" + tail + dir_a.string()).code == 0);
    CHECK(run_cli("solve" + tail + dir_b.string()).code == 0);
    CHECK(slurp(dir_a / "solution.csv") == slurp(dir_b / "solution.csv"));
}

TEST_CASE("cli: exit codes") {
    SUBCASE("invalid profile") {
        CHECK(run_cli("solve --alphas 2 --rhos 0.5 --ic sine:1").code == 2);
    }
    SUBCASE("missing config file") {
        CHECK(run_cli("solve --config /nonexistent/scenario.json").code == 2);
    }
    SUBCASE("unknown config key") {
        const auto dir = fresh_dir("badkey");
        {
            std::ofstream os(dir / "cfg.json");
            os << "{\"alfa\": [2.0]}\n";
        }
        CHECK(run_cli("solve --config " + (dir / "cfg.json").string()).code == 2);
    }
    SUBCASE("unknown solver key") {
        const auto dir = fresh_dir("badsolver");
        {
            std::ofstream os(dir / "cfg.json");
            os << "{\"alphas\": [2.0], \"solver\": {\"bogus\": 1}}\n";
        }
        CHECK(run_cli("solve --config " + (dir / "cfg.json").string()).code == 2);
    }
    SUBCASE("parse failures") {
        CHECK(run_cli("frobnicate").code == 2);
        CHECK(run_cli("").code == 2);
        CHECK(run_cli("solve --alphas 2 --ic gauss:1").code == 2);
        CHECK(run_cli("solve --alphas 2 --method fancy").code == 2);
    }
    SUBCASE("help is not an error") {
        CHECK(run_cli("--help").code == 0);
    }
}

TEST_CASE("cli: config file with flag overrides") {
    const auto dir = fresh_dir("cfg");
    const fs::path cfg = dir / "scenario.json";
    {
        std::ofstream os(cfg);
        os << R"({
  "alphas": [2.0],
  "ic": {"kind": "sine", "params": [2]},
  "r_f": 0.25,
  "N": 63,
  "with_reference": false,
  "solver": {"truncation_tol": 1e-6}
})";
    }
    SUBCASE("config values apply") {
        const auto out = fresh_dir("cfg_plain");
        CHECK(run_cli("solve --config " + cfg.string() + " --out " + out.string())
                  .code == 0);
        const json summary = read_json(out / "summary.json");
        CHECK(summary.at("r_f").get<double>() == doctest::Approx(0.25));
        CHECK(summary.at("N") == 63);
        CHECK_FALSE(summary.contains("error_vs_reference"));
    }
    SUBCASE("flags win over the config") {
        const auto out = fresh_dir("cfg_override");
        CHECK(run_cli("solve --config " + cfg.string() + " --rf 0.5 --out " +
                      out.string())
                  .code == 0);
        const json summary = read_json(out / "summary.json");
        CHECK(summary.at("r_f").get<double>() == doctest::Approx(0.5));
    }
}
