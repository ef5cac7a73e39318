#pragma once

#include <cstdint>
#include <functional>

#include "sfac/cli/run_config.hpp"
#include "sfac/core.hpp"

namespace sfac::cli {

/// Exit codes of the command-line tool.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

/// Parses argv, runs the subcommand and maps errors to exit codes.
int run(int argc, char** argv);

/// Runs a resolved configuration and writes `<out>.manifest`.
void execute(const RunConfig& config);

void cmd_sample(const RunConfig& c);
void cmd_estimate(const RunConfig& c);
void cmd_pcf(const RunConfig& c);
void cmd_hindex(const RunConfig& c);
void cmd_alpha(const RunConfig& c);
void cmd_test(const RunConfig& c);
void cmd_benchmark(const RunConfig& c);
void cmd_plotdata(const RunConfig& c);

/// Window described by the window/lengths/radius/dim keys.
Window window_from_config(const RunConfig& c);

/// Pattern of the configured process on w.
PointPattern sample_process(const RunConfig& c, const Window& w, std::uint64_t seed);

/// Exact structure factor of the configured process.
std::function<double(double)> exact_structure_factor(const RunConfig& c, const std::string& process_key = "process");

}  // namespace sfac::cli
