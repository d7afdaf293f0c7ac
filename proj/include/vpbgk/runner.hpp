#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vpbgk/config.hpp"
#include "vpbgk/domain.hpp"

namespace vpbgk {

enum class Command { Run, SweepNz, CompareControl };

struct RunPlan {
    Command command = Command::Run;
    std::string config_path;
    std::vector<std::string> overrides; // key=value, applied after the file
    std::optional<std::string> out_dir; // overrides output.dir
    std::optional<std::uint64_t> seed;  // overrides seed
};

// In-memory results, reused by the acceptance suite.
struct RunResult {
    std::vector<double> times;       // t_0 .. t_final (step_count + 1 entries)
    std::vector<double> energy_mean; // quadrature mean boundary thermal energy
    std::vector<double> energy_std;
    std::vector<double> temp_mean;
    std::vector<std::vector<double>> control_trace; // per step, n_cells values
    Grid final_mean_density;
    double final_time = 0.0;
    std::size_t cfl_warnings = 0;
};

struct SweepResult {
    std::vector<int> members;
    std::vector<double> errors;
    std::vector<double> wall_seconds;
};

struct CompareResult {
    std::vector<std::string> variants;
    std::vector<double> times;
    std::vector<std::vector<double>> energy_mean; // one series per variant
};

// Execute one configured simulation; writes artifacts under cfg.output.dir
// when write_outputs is set (timeseries, control trace, snapshots, resolved
// config echo, plot script).
RunResult run_single(const ScenarioConfig& cfg, bool write_outputs = true);

// Collocation-error sweep: all members run with the configured seed to
// sweep.t_final; the error of each member is the max-norm difference of the
// mean density against the sweep.ref run.
SweepResult run_sweep(const ScenarioConfig& cfg, bool write_outputs = true);

// Run several controller variants under identical seeds and join their mean
// boundary-energy series.
CompareResult run_compare(const ScenarioConfig& cfg, bool write_outputs = true);

// Apply a compare variant token to a config (operator or method switch).
ScenarioConfig apply_variant(const ScenarioConfig& base, const std::string& token);

// CLI entry: returns the process exit code (0 ok, 1 runtime error, 2 config
// error).
int execute(const RunPlan& plan);

} // namespace vpbgk
