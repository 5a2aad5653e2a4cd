#pragma once

// Command-line front end. The executable in tools/ is a thin wrapper around
// run(); tests drive run() directly with in-memory streams.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dzeta/analysis.hpp"
#include "dzeta/deficiency.hpp"
#include "dzeta/series_core.hpp"

namespace dzeta::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kIo = 3,
    kDataFormat = 4,
};

enum class Command { Estimate, Sweep, Rate, Spectral, Experiment };
enum class ExperimentId { I, II, III, IV, V, VI, AppendixF };

std::optional<ExperimentId> parse_experiment_id(const std::string& token);

/// Fully validated run description. Built from command-line flags layered
/// over an optional `key = value` config file layered over defaults.
struct RunConfig {
    Command command = Command::Estimate;
    std::optional<ExperimentId> experiment;
    std::optional<double> p;
    std::optional<double> q;
    std::optional<std::size_t> n;
    std::optional<std::size_t> n_max;
    std::vector<EstimatorKind> estimators;
    std::optional<BaseStrategy> base_strategy;
    std::optional<double> alpha;
    std::optional<std::string> spectrum_path;
    std::optional<std::string> out_path;
    ReferenceConfig reference;
    double saturation_floor = kDefaultSaturationFloor;
    std::optional<FitWindow> fit_window;
    std::optional<double> plateau_exponent;
    int points_per_decade = 40;
    bool self_test = false;
};

/// Recognised keys, shared by flags (as --key) and config files.
const std::vector<std::string>& config_keys();

/// Parses `key = value` lines; '#' starts a comment line. Unknown keys are
/// validation errors.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Turns raw string settings into a RunConfig, validating every numeric.
RunConfig make_config(Command command, const std::map<std::string, std::string>& settings);

/// Shortest decimal that round-trips to the same binary64.
std::string format_double(double x);

/// `n,<label_1>,...` header and one row per grid point; all series must share
/// the same grid. LF line endings.
std::string to_csv(const std::vector<ErrorSeries>& columns);

int cmd_estimate(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
int cmd_rate(const RunConfig& config, std::ostream& out);
int cmd_spectral(const RunConfig& config, std::ostream& out);
int cmd_experiment(const RunConfig& config, std::ostream& out);

/// Entry point: args excludes the program name. Errors are reported on err
/// and mapped to the ExitCode contract.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dzeta::cli
