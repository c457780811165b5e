#pragma once

// Experiment configuration, execution and tabular reporting behind the
// `clonesim` command-line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonesim/cloners.hpp"
#include "clonesim/compensation.hpp"
#include "clonesim/counting.hpp"
#include "clonesim/imperfections.hpp"

namespace clonesim {

/// Invalid configuration; `field` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// Unreadable input or unwritable output.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct SweepSpec {
    std::vector<double> theta;
    std::vector<double> phi;
};

struct CountingSpec {
    std::uint64_t n_pairs = 0;
    DetectorBank detectors;
    std::optional<BalanceMethod> balance;
};

struct OptimizeSpec {
    Objective objective = Objective::min_fidelity_gap;
    std::vector<FreeParameter> free;
};

struct OutputSpec {
    OutputFormat format = OutputFormat::csv;
    std::string path;  // empty: standard output
};

struct ExperimentConfig {
    std::string label;
    ClonerParams model;
    NoiseConfig noise;
    std::optional<Qubit> input;
    std::optional<SweepSpec> sweep;
    std::optional<CountingSpec> counting;
    std::optional<OptimizeSpec> optimize;
    OutputSpec output;
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
/// IoError when the file cannot be read, ConfigError when it does not parse or validate.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Inputs in row order: the single input, or theta-major over the sweep grid.
std::vector<Qubit> inputs_of(const ExperimentConfig& config);

struct CountColumns {
    std::uint64_t c_pp = 0;
    std::uint64_t c_pm = 0;
    std::uint64_t c_mp = 0;
    std::uint64_t c_mm = 0;
    double F1_hat = 0.0;  // NaN when no coincidences were registered
    double F2_hat = 0.0;
    double P_hat = 0.0;
    friend bool operator==(const CountColumns&, const CountColumns&) = default;
};

struct ResultRow {
    double theta = 0.0;
    double phi = 0.0;
    double F1 = 0.0;
    double F2 = 0.0;
    double P_succ = 0.0;
    std::optional<CountColumns> counts;
};

/// One row per input.  Counting columns are present when the config has a
/// counting section.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);
/// Requires a sweep with a non-empty phi list.
std::vector<ResultRow> sweep_phase(const ExperimentConfig& config);
/// Requires a counting section.
std::vector<ResultRow> run_montecarlo(const ExperimentConfig& config);

struct CompareRow {
    std::string label;
    std::string variant;
    double F1 = 0.0;
    double F2 = 0.0;
    double P_succ = 0.0;
    /// Registered coincidences per simulated pair; the analytic success
    /// probability when the config has no counting section.
    double rate_proxy = 0.0;
};

/// At least two configs with distinct labels.
std::vector<CompareRow> compare(const std::vector<ExperimentConfig>& configs);

/// Requires an optimize section.
OptimizationResult run_optimize(const ExperimentConfig& config);

/// Fixed 10-significant-digit rendering used by every emitter; NaN -> "nan".
std::string format_number(double value);
/// The value as it appears in emitted files.
double rounded(double value);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string rows_to_json(const std::vector<ResultRow>& rows);
std::vector<ResultRow> rows_from_csv(const std::string& text);
std::vector<ResultRow> rows_from_json(const std::string& text);

std::string compare_to_csv(const std::vector<CompareRow>& rows);
std::string compare_to_json(const std::vector<CompareRow>& rows);

std::string optimization_to_csv(const OptimizationResult& result);
std::string optimization_to_json(const OptimizationResult& result);

std::string emit_rows(const std::vector<ResultRow>& rows, OutputFormat format);

/// Writes to `path`, or standard output when empty.  IoError on failure.
void write_output(const std::string& path, const std::string& content);

OutputFormat parse_format(const std::string& name);

}  // namespace clonesim
