#pragma once

#include "rsgame/config.hpp"
#include "rsgame/smoothfit.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rsgame {

/// Directory for outputs when no --out is given.
inline constexpr const char* kOutputDirEnv = "RSGAME_OUTPUT_DIR";

struct SweepRow {
    double value = 0.0;
    std::optional<SmoothFitSolution> solution;
    std::string error;
    /// Exit status of the failure; 0 when solved.
    int exitCode = 0;
};

/// Solves one row per value. Sequential rows warm-start from the last
/// successful row; with spec.parallel every row starts from initial_guess.
std::vector<SweepRow> run_sweep_rows(const GameParams& base, const SweepSpec& spec);

/// Where the artifact of a run goes: --out if given, else $RSGAME_OUTPUT_DIR/<mode>.<ext>,
/// else nothing (standard output).
std::optional<std::filesystem::path> output_path(const RunConfig& cfg);

// Each runner writes its artifact and a short summary and returns the exit
// code. Artifacts go to standard output when there is no output path, and the
// summary then goes to `err`.
int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_reduce(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_plotdata(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on cfg.mode; library errors become diagnostics and exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line: verb, flags, config file. argv[0] is the program name.
int cli_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

} // namespace rsgame
