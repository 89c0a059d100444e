#pragma once

#include <string>

namespace chemrep {

/// Total exit-status taxonomy shared by every subcommand; each termination
/// path maps to exactly one code (documented in FORMATS.md).
namespace exit_code {
inline constexpr int ok = 0;            ///< completed, all checks passed
inline constexpr int usage = 1;         ///< bad arguments or invalid config
inline constexpr int blow_up = 2;       ///< simulate terminated on blow-up detection
inline constexpr int fault = 3;         ///< internal contract violation (solver fault, ...)
inline constexpr int verify_failed = 4; ///< at least one verify sample missed its bound
inline constexpr int io_error = 5;      ///< file-system or format failure
} // namespace exit_code

/// Runs a configured simulation: timeseries CSV every step, snapshots per
/// the output block plus a final one, and summary.json with the termination
/// cause and criterion report. Returns an exit_code value.
int cmd_simulate(const std::string& config_path);

/// Runs an inequality batch: one CSV per requested check (row per sample)
/// plus verify_summary.json. Returns ok iff every sample passed its bound.
int cmd_verify(const std::string& batch_path);

/// Runs a named convergence study and writes convergence-<id>.csv under the
/// output root. Known ids: manufactured-1d, constant-1d, bochner.
int cmd_convergence(const std::string& case_id);

/// Reads a run directory written by cmd_simulate and prints a plain-text
/// digest (mass drift, v-mass law deviation, Lyapunov monotonicity,
/// criterion accumulators) to stdout.
int cmd_report(const std::string& run_dir);

} // namespace chemrep
