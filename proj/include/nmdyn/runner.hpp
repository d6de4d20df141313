// runner.hpp — subcommand orchestration and result emission.
//
// Output files are written atomically (temp file + rename). Floats in CSV use
// %.17g; JSON doubles use shortest round-trip formatting. No timestamps are
// written, so identical inputs give byte-identical outputs.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nmdyn/config.hpp"
#include "nmdyn/oracle.hpp"

namespace nmdyn::cli {

enum class Command { Simulate, Check, Compare, CutoffStudy, Sweep };

std::optional<Command> parse_command(std::string_view name);

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitThreshold = 4,
};

struct RunOptions {
    std::filesystem::path out_dir = ".";
    double threshold = 1e-6;
    unsigned jobs = 1;
};

struct SimulationOutput {
    std::string csv;
    nlohmann::json report;
};

// Throws nmdyn::Error on numerical failure or ρ_S invariant violation.
SimulationOutput run_simulation(const RunConfig& cfg);

nlohmann::json dilation_json(const DilationReport& report);

struct ComparisonResult {
    double sup = 0.0;
    double l2 = 0.0;
    double raw_sup = 0.0;      // second-order oracle without extrapolation
    std::size_t steps = 0;
};

ComparisonResult run_comparison(const RunConfig& cfg);

struct CutoffStudyRow {
    double cutoff = 0.0;
    double sup_deviation = 0.0;
};

struct CutoffStudyResult {
    std::vector<CutoffStudyRow> rows;
    std::size_t steps = 0;
};

// Oracle steps are raised as needed so that h ≤ 0.025/Ω_max.
CutoffStudyResult run_cutoff_study(const RunConfig& cfg);

std::string format_double(double x);

void write_atomically(const std::filesystem::path& path, const std::string& content);

// Runs one subcommand; returns the process exit code. Diagnostics go to `log`,
// the check report is echoed to `out`.
int run(Command command, const RunConfig& cfg, const RunOptions& options, std::ostream& out, std::ostream& log);

}  // namespace nmdyn::cli
