#pragma once

// Batch front end. Every subcommand reads one JSON document and produces one
// JSON report; reports carry no timings, so identical inputs and seeds give
// byte-identical output.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ageom/json_io.hpp"

namespace ageom {

struct RunConfig {
    std::string command;             ///< check, project, douglas, ..., seq, suite
    std::vector<std::string> args;   ///< positional arguments after the command
    std::string input;               ///< JSON path, "-" for stdin
    std::string out;                 ///< report path; empty for stdout
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> horizon;
    std::optional<std::size_t> trials;
    std::optional<double> t1;
};

struct RunResult {
    int exit_code = 0; ///< 0 ok, 1 input error, 2 verification failure
    json report;
};

RunResult run(const RunConfig& config);
/// Runs a subcommand on an already parsed input document.
RunResult run(const RunConfig& config, const json& input);

/// Report text as written by the binary: two-space indent and a newline.
std::string render(const json& report);

/// Subcommands that need an input document.
bool needs_input(const std::string& command);

} // namespace ageom
