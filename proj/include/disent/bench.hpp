#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "disent/disentangle.hpp"
#include "disent/generators.hpp"
#include "disent/wavefunction.hpp"

namespace disent::bench {

/// Settings shared by the CLI subcommands. Defaults match the most common
/// runs; each command reads the subset it needs.
struct Config {
    std::string command; // bench | trunc | wave | run
    Dims dims{2, 2, 2, 2};
    TensorKind kind = TensorKind::gaussian;
    long trials = 100;
    std::uint64_t seed = 1;
    long restarts = 8;
    long layers = 500;
    int qubits = 10;
    SweepMethod method = SweepMethod::fast;
    std::string format = "csv"; // csv | json
    std::string out;            // output path; empty writes to stdout
    bool bits = false;          // report entropies in bits instead of nats
    bool timings = false;       // add wall-time columns (breaks byte determinism)

    /// Rejects inconsistent settings (bad format, kind/dims mismatch, ...):
    /// everything detectable before any computation starts.
    void validate() const;
};

enum class ColType { floating, integral, text };

/// Flat result document shared by the CSV and JSON writers. Cell values are
/// pre-rendered tokens: floats via format_float, integers in decimal, text
/// verbatim. A token "nan" in a floating column marks an undefined value
/// (JSON renders it as null).
struct Table {
    std::vector<std::pair<std::string, ColType>> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> config;  // echoed settings
    std::vector<std::pair<std::string, std::string>> summary; // aggregates

    void add_column(std::string name, ColType type) { columns.emplace_back(std::move(name), type); }
};

/// Scientific notation with 17 significant digits, enough to round-trip a
/// double exactly.
std::string format_float(double x);

/// Nearest-rank quantile: the ceil(q*N)-th smallest value, q in (0, 1].
double quantile(std::vector<double> values, double q);

/// CSV: `# key=value` config comments, a header line, data rows, then
/// `# key=value` summary comments.
std::string to_csv(const Table& t);

/// Single JSON object {"columns", "config", "rows", "summary"} with config
/// and summary keys sorted, rows as arrays in column order.
std::string to_json(const Table& t);

Table run_bench(const Config& cfg);  // per-trial entropies vs descent baselines
Table run_trunc(const Config& cfg);  // truncation-error curves per unitary
Table run_wave(const Config& cfg);   // alternating sweeps over a random state
Table run_single(const Config& cfg); // one instance end to end

/// Dispatches to the run_* function for cfg.command.
Table run_command(const Config& cfg);

/// Renders the table in cfg.format and writes it to cfg.out or stdout.
void write_output(const Config& cfg, const Table& t);

} // namespace disent::bench
