#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "disent/bench.hpp"

using namespace disent;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the installed CLI binary; returns its exit code.
int run_cli(const std::string& args) {
    std::string cmd = std::string(DISENT_CLI_PATH) + " " + args;
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

bench::Config tiny_bench_config() {
    bench::Config cfg;
    cfg.command = "bench";
    cfg.dims = {2, 2, 2, 2};
    cfg.trials = 3;
    cfg.restarts = 2;
    cfg.seed = 5;
    return cfg;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("quantile uses the nearest-rank convention") {
    std::vector<double> v{10, 9, 8, 7, 6, 5, 4, 3, 2, 1};
    CHECK(bench::quantile(v, 0.5) == 5.0);
    CHECK(bench::quantile(v, 0.16) == 2.0);
    CHECK(bench::quantile(v, 0.84) == 9.0);
    CHECK(bench::quantile(v, 1.0) == 10.0);
    CHECK(bench::quantile({42.0}, 0.5) == 42.0);
    CHECK_THROWS_AS(bench::quantile({}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(bench::quantile(v, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bench::quantile(v, 1.5), std::invalid_argument);
}

TEST_CASE("float tokens round-trip exactly") {
    for (double x : {1.0, -1.0, 0.3333333333333333, 1e-300, 2.2e18, 0.0}) {
        std::string tok = bench::format_float(x);
        CHECK(std::stod(tok) == x);
    }
    CHECK(bench::format_float(std::nan("")) == "nan");
    CHECK(bench::format_float(-0.0) == bench::format_float(0.0));
}

TEST_CASE("csv layout carries config, header, rows and summary") {
    bench::Table t = bench::run_bench(tiny_bench_config());
    std::string csv = bench::to_csv(t);
    std::vector<std::string> lines = lines_of(csv);
    REQUIRE(!lines.empty());

    std::size_t i = 0;
    int config_lines = 0;
    while (i < lines.size() && lines[i].rfind("# ", 0) == 0) {
        ++config_lines;
        ++i;
    }
    CHECK(config_lines > 0);
    REQUIRE(i < lines.size());
    std::string header = lines[i];
    CHECK(header.rfind("trial,seed,regime,", 0) == 0);
    int data_rows = 0;
    ++i;
    while (i < lines.size() && lines[i].rfind("#", 0) != 0) {
        ++data_rows;
        ++i;
    }
    CHECK(data_rows == 3);
    int summary_lines = 0;
    while (i < lines.size()) {
        CHECK(lines[i].rfind("# ", 0) == 0);
        ++summary_lines;
        ++i;
    }
    CHECK(summary_lines > 0);
}

TEST_CASE("json output parses and mirrors the table") {
    bench::Table t = bench::run_bench(tiny_bench_config());
    json doc = json::parse(bench::to_json(t));
    REQUIRE(doc.is_object());
    REQUIRE(doc.contains("columns"));
    REQUIRE(doc.contains("rows"));
    REQUIRE(doc.contains("config"));
    REQUIRE(doc.contains("summary"));
    CHECK(doc["columns"].size() == t.columns.size());
    REQUIRE(doc["rows"].size() == t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        REQUIRE(doc["rows"][r].size() == t.columns.size());

    // Text columns stay strings even when they look numeric (seeds may
    // exceed the double-exact integer range).
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (t.columns[c].first == "seed")
            CHECK(doc["rows"][0][c].is_string());
        if (t.columns[c].first == "s_fast")
            CHECK(doc["rows"][0][c].is_number());
    }
    CHECK(doc["config"]["command"] == "bench");
}

TEST_CASE("undefined ratios become nan tokens and json nulls") {
    bench::Config cfg = tiny_bench_config();
    cfg.kind = TensorKind::ansatz;
    cfg.trials = 1;
    bench::Table t = bench::run_bench(cfg);

    long ratio_col = -1;
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        if (t.columns[c].first == "ratio_fast") ratio_col = static_cast<long>(c);
    REQUIRE(ratio_col >= 0);
    // The ansatz minimum entropy is zero, so the ratio is undefined.
    CHECK(t.rows[0][static_cast<std::size_t>(ratio_col)] == "nan");

    json doc = json::parse(bench::to_json(t));
    CHECK(doc["rows"][0][static_cast<std::size_t>(ratio_col)].is_null());
}

TEST_CASE("library output is byte deterministic for equal configs") {
    bench::Config cfg = tiny_bench_config();
    std::string a = bench::to_csv(bench::run_bench(cfg));
    std::string b = bench::to_csv(bench::run_bench(cfg));
    CHECK(a == b);
    std::string ja = bench::to_json(bench::run_bench(cfg));
    CHECK(ja == bench::to_json(bench::run_bench(cfg)));
}

TEST_CASE("config validation rejects inconsistent settings") {
    bench::Config cfg = tiny_bench_config();
    cfg.format = "xml";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_bench_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_bench_config();
    cfg.command = "trunc";
    cfg.kind = TensorKind::lambda_inv;
    cfg.dims = {2, 3, 3, 3};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_bench_config();
    cfg.command = "wave";
    cfg.qubits = 2;
    cfg.layers = 2;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = tiny_bench_config();
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("run summary echoes the spectra and regime") {
    bench::Config cfg;
    cfg.command = "run";
    cfg.dims = {2, 2, 2, 2};
    cfg.trials = 1;
    cfg.seed = 9;
    bench::Table t = bench::run_single(cfg);

    bool has_entropy_after = false, has_regime = false, has_unitarity = false;
    for (const auto& [k, v] : t.summary) {
        if (k == "entropy_after") has_entropy_after = true;
        if (k == "regime") {
            has_regime = true;
            CHECK(v == "base");
        }
        if (k == "unitarity_error") has_unitarity = true;
    }
    CHECK(has_entropy_after);
    CHECK(has_regime);
    CHECK(has_unitarity);

    int spectrum_rows = 0;
    for (const auto& row : t.rows)
        if (row[0] == "output_spectrum") ++spectrum_rows;
    CHECK(spectrum_rows == 4); // min(chi1*chi3, chi2*chi4)
}

TEST_SUITE("slow") {

TEST_CASE("cli runs end to end with stable bytes and exit codes") {
    const std::string dir = "/tmp/disent-cli-test";
    REQUIRE(std::system(("mkdir -p " + dir).c_str()) == 0);

    // Identical invocations produce identical files.
    std::string out1 = dir + "/a.csv", out2 = dir + "/b.csv";
    CHECK(run_cli("bench --chi1 2 --chi2 2 --chi3 2 --chi4 2 --trials 3 --restarts 2 --seed 5 --out " +
                  out1) == 0);
    CHECK(run_cli("bench --chi1 2 --chi2 2 --chi3 2 --chi4 2 --trials 3 --restarts 2 --seed 5 --out " +
                  out2) == 0);
    CHECK(slurp(out1) == slurp(out2));

    // Library and CLI agree byte for byte.
    bench::Config cfg = tiny_bench_config();
    CHECK(slurp(out1) == bench::to_csv(bench::run_bench(cfg)));

    // wave emits one row per layer plus the starting row.
    std::string wout = dir + "/w.csv";
    CHECK(run_cli("wave --qubits 4 --layers 3 --seed 2 --out " + wout) == 0);
    std::vector<std::string> wlines = lines_of(slurp(wout));
    int data = 0;
    for (const std::string& l : wlines)
        if (!l.empty() && l[0] != '#' && l.rfind("layer,", 0) != 0) ++data;
    CHECK(data == 4);

    // Bits conversion rescales entropies by ln 2.
    std::string nats_path = dir + "/nats.json", bits_path = dir + "/bits.json";
    CHECK(run_cli("run --chi1 2 --chi2 2 --chi3 2 --chi4 2 --seed 3 --format json --out " +
                  nats_path) == 0);
    CHECK(run_cli("run --chi1 2 --chi2 2 --chi3 2 --chi4 2 --seed 3 --bits --format json --out " +
                  bits_path) == 0);
    json nats = json::parse(slurp(nats_path));
    json bits = json::parse(slurp(bits_path));
    double sn = nats["summary"]["entropy_after"].get<double>();
    double sb = bits["summary"]["entropy_after"].get<double>();
    CHECK(sb == doctest::Approx(sn / std::log(2.0)).epsilon(1e-12));

    // Exit codes: configuration errors are 2, domain failures 1, help 0.
    CHECK(run_cli("bench --kind no-such-kind --out /dev/null 2>/dev/null") == 2);
    CHECK(run_cli("run --chi1 4 --chi2 3 --chi3 3 --chi4 4 --out /dev/null 2>/dev/null") == 1);
    CHECK(run_cli("--help > /dev/null") == 0);
    CHECK(run_cli("bench --trials 2 --out /nonexistent-dir/x.csv 2>/dev/null") == 2);
}

} // TEST_SUITE
