#pragma once

// Command-line front end. Every run writes its CSV outputs next to a
// <prefix>.manifest.json that fully determines the run, so `qws replay`
// reproduces the CSV bytes.

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qws/operator_dynamics.hpp"
#include "qws/otoc.hpp"
#include "qws/state_dynamics.hpp"
#include "qws/walk_core.hpp"

namespace qws::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDegenerate = 3 };

/// Radians from "0.25pi", "pi", "-1.5pi" or a plain number.
double parse_angle(std::string_view text);

/// Resolved settings for one run; the manifest stores exactly this.
struct RunOptions {
    std::string command;  // dispersion | evolve | otoc | krylov
    double theta = 0.0;
    int k_points = 1025;
    int sites = 100;
    int steps = 50;
    DisorderKind disorder = DisorderKind::Clean;
    double strength = 0.0;
    Distribution distribution = Distribution::UniformInterval;
    int realizations = 100;
    std::uint64_t seed = 1;
    InitialState initial = InitialState::Symmetric;
    std::vector<AxisPair> pairs = all_pairs();
    Normalization norm = Normalization::Trace;
    Axis mu = Axis::X;
    int site = 0;
    std::vector<std::string> emit{"k"};
    std::string out;

    WalkConfig walk_config() const;
    /// Clean schedules ignore the seed, so they always run a single realization.
    int effective_realizations() const;
};

nlohmann::json to_json(const RunOptions& opts);
RunOptions options_from_json(const nlohmann::json& j);

/// Shortest round-trip text for a double.
std::string format_double(double v);

/// Runs one already-resolved command; returns the output files written. Throws on error.
std::vector<std::string> execute(const RunOptions& opts, int workers, std::ostream& log);

/// Maps a failure to its exit code (2 usage/config/domain, 3 numerical degeneracy, 1 other)
/// and prints the message; ensemble failures are classified by their cause.
int exit_code_for(std::exception_ptr error, std::ostream& err);

/// Full CLI: parses argv-style arguments (without the program name) and maps errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qws::cli
