#pragma once
#include "dxl/cli/config.hpp"
#include "dxl/core/trace.hpp"

namespace dxl {

inline constexpr const char* kVersion = "0.1.0";

// Executes one run and writes traces/<axis>.csv, fits.csv, fit_records.txt,
// convergence.txt (mean-field solvers) and manifest.txt under cfg.out.
void run(const RunConfig& cfg);

// Sweep campaign: one subdirectory per grid point plus summary.csv. Completed
// points (manifest hashes verify) are skipped on resume; failed points are
// recorded and the campaign continues. Throws only if every point failed.
void run_sweep(const SweepSpec& sweep, const std::filesystem::path& out_dir);

// In-memory version of the solver dispatch; the CLI writes its outputs.
std::vector<CorrelatorTrace> compute_traces(const RunConfig& cfg,
                                            std::vector<std::string>* notes = nullptr);

} // namespace dxl
