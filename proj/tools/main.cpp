#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>

#include "disent/bench.hpp"
#include "disent/generators.hpp"
#include "disent/wavefunction.hpp"

namespace {

using disent::bench::Config;

void add_output_flags(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--format", cfg.format, "output format: csv or json");
    cmd->add_option("--out", cfg.out, "write the report to this file instead of stdout");
    cmd->add_flag("--bits", cfg.bits, "report entropies in bits instead of nats");
}

void add_tensor_flags(CLI::App* cmd, Config& cfg, std::string& kind) {
    cmd->add_option("--chi1", cfg.dims.chi1, "first output leg size")->check(CLI::PositiveNumber);
    cmd->add_option("--chi2", cfg.dims.chi2, "second output leg size")->check(CLI::PositiveNumber);
    cmd->add_option("--chi3", cfg.dims.chi3, "left free leg size")->check(CLI::PositiveNumber);
    cmd->add_option("--chi4", cfg.dims.chi4, "right free leg size")->check(CLI::PositiveNumber);
    cmd->add_option("--kind", kind,
                    "tensor family: gaussian, lambda-inv, lambda-pow2, mu-inv or ansatz");
    cmd->add_option("--seed", cfg.seed, "root seed; trial t runs on a stream derived from it");
}

} // namespace

int main(int argc, char** argv) {
    Config cfg;
    std::string kind = "gaussian";
    std::string method = "fast";

    try {
        CLI::App app{"randomized disentangling of order-3 tensors: benchmarks and sweeps"};
        app.require_subcommand(1);

        CLI::App* bench = app.add_subcommand(
            "bench", "per-trial entropies of the single-pass unitary vs descent baselines");
        add_tensor_flags(bench, cfg, kind);
        bench->add_option("--trials", cfg.trials, "independent tensors to draw")
            ->check(CLI::PositiveNumber);
        bench->add_option("--restarts", cfg.restarts, "descent restarts for the minimum estimate")
            ->check(CLI::PositiveNumber);
        bench->add_flag("--timings", cfg.timings,
                        "add wall-time columns (output is no longer byte-reproducible)");
        add_output_flags(bench, cfg);

        CLI::App* trunc = app.add_subcommand(
            "trunc", "truncation-error curves for identity, single-pass and descent unitaries");
        add_tensor_flags(trunc, cfg, kind);
        trunc->add_option("--trials", cfg.trials, "independent tensors to draw")
            ->check(CLI::PositiveNumber);
        trunc->add_option("--restarts", cfg.restarts, "descent restarts for the minimum estimate")
            ->check(CLI::PositiveNumber);
        add_output_flags(trunc, cfg);

        CLI::App* wave = app.add_subcommand(
            "wave", "alternating disentangling sweeps over a random qubit state");
        wave->add_option("--qubits", cfg.qubits, "number of qubits")->check(CLI::Range(2, 24));
        wave->add_option("--layers", cfg.layers, "number of sweep layers")
            ->check(CLI::PositiveNumber);
        wave->add_option("--method", method, "gate choice: fast, descent or fast-then-descent");
        wave->add_option("--seed", cfg.seed, "seed for the state and the gate randomness");
        wave->add_flag("--timings", cfg.timings, "add wall-time columns");
        add_output_flags(wave, cfg);

        CLI::App* run = app.add_subcommand(
            "run", "one tensor end to end: spectra before and after disentangling");
        add_tensor_flags(run, cfg, kind);
        run->add_option("--trials", cfg.trials, "independent single-pass attempts, best kept")
            ->check(CLI::PositiveNumber);
        add_output_flags(run, cfg);

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e); // prints help or the error message
            return code == 0 ? 0 : 2;
        }

        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        if (cfg.command == "run" && sub->get_option("--trials")->count() == 0) cfg.trials = 1;
        cfg.kind = disent::parse_kind(kind);
        if (cfg.command == "wave") cfg.method = disent::parse_method(method);
        cfg.validate();

        if (!cfg.out.empty()) {
            std::ofstream probe(cfg.out, std::ios::binary | std::ios::app);
            if (!probe)
                throw std::invalid_argument(
                    fmt::format("cannot open '{}' for writing", cfg.out));
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }

    try {
        const disent::bench::Table table = disent::bench::run_command(cfg);
        disent::bench::write_output(cfg, table);
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
