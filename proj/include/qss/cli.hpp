#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qss/matrix.hpp"
#include "qss/qpe.hpp"
#include "qss/report.hpp"

namespace qss {

enum class Command { Validate, Spectrum, Sample, Estimate, Budget, Cost, Adaptive };

std::string_view to_string(Command command) noexcept;

enum class ScaleMode { Default, Auto, None };

struct RunConfig {
    Command command = Command::Validate;

    std::string matrix_path;
    std::optional<double> epsilon;
    std::optional<int> m;
    std::optional<std::uint64_t> samples;
    QpeMode mode = QpeMode::FullDistribution;
    std::string function = "logdet";
    std::optional<std::uint64_t> seed;
    std::string output_path;        // report destination; stdout when empty
    std::string dump_samples_path;  // optional "j,k,m,mode" dump
    std::string csv_path;           // cost sweeps
    unsigned threads = 1;

    // Overrides of the oracle (mu, Delta, kappa); also the inputs of `budget`.
    std::optional<double> mu;
    std::optional<double> delta;
    std::optional<double> kappa;
    std::optional<double> gamma;

    BoundSource lambda_max_source = BoundSource::Oracle;
    std::optional<double> lambda_max;  // with lambda_max_source = Supplied
    std::optional<double> lambda_min;
    /// Default rescales for logdet and leaves other functions unscaled.
    ScaleMode scale = ScaleMode::Default;
    std::size_t dense_cap = kDefaultDenseCap;

    // cost
    std::optional<std::size_t> n;
    std::optional<std::size_t> s;
    std::optional<double> eta;
    std::optional<double> a_max;
    std::optional<double> qram_cost;
    std::vector<double> sweep_epsilon;
    std::vector<std::size_t> sweep_n;

    // adaptive
    int seed_m = 4;
    std::uint64_t seed_n = 16;
    int max_restarts = 8;
    double growth = 2.0;

    /// Written verbatim into the report; the current UTC time when empty.
    std::string timestamp;
};

struct RunResult {
    int exit_code = 0;
    Json report;
};

/// Executes the command in-process. Library errors become a nonzero exit
/// code and an "error" object in the report; nothing is written to disk
/// except the optional sample dump and CSV.
RunResult run(const RunConfig& config);

/// run() and then write the rendered report to output_path (or stdout).
int run_and_write(const RunConfig& config);

/// Parse argv into a RunConfig. Throws Error(InvalidConfig) on bad usage;
/// returns std::nullopt after printing help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv);

}  // namespace qss
