#ifndef CHTX_COMMANDS_HPP
#define CHTX_COMMANDS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "chtx/config.hpp"
#include "chtx/solver.hpp"

namespace chtx {

/// Process exit codes.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int no_regime = 2;
inline constexpr int blowup = 3;
inline constexpr int step_collapse = 4;
}  // namespace exit_code

int exit_code_for(RunStatus status);

/// Human-readable verdict: a "verdict:" line, then one line per margin.
std::string format_verdict(const RegimeVerdict& verdict);

nlohmann::json verdict_json(const RegimeVerdict& verdict);

/// Header: t, dt_used, mass, linf_u, linf_v, linf_w, nonlocal_beta, then
/// lk_norm_k, phi_k, grad_term_k per exponent, then blowup_flag.
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series);

nlohmann::json summary_json(const RunOutcome& outcome, const RunConfig& config);

struct RunInputs {
    Grid grid;
    Field u0;
    Field v0;
    Field w0;
};

/// Materializes grid and initial fields for a config. For tau = 0 the
/// signal fields are left empty.
RunInputs build_run_inputs(const RunConfig& config, const std::filesystem::path& base_dir = {});

struct SweepRow {
    std::vector<double> values;  ///< one per axis
    std::string theorem;
    std::string case_label;
    std::string comparison;
    std::string status = "NotRun";
    double mass_max = 0;
    double sup_linf_u = 0;
    double t_final = 0;
    bool ran = false;
    std::string error;
};

/// Evaluates every cell of the cartesian product of the axes (first axis
/// slowest). Cells run on up to `threads` workers; row order is fixed.
std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, bool classify_only,
                                unsigned threads, const std::filesystem::path& base_dir = {});

std::string sweep_csv(const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows);

/// Worker count for sweeps: CHTX_THREADS if set and positive, otherwise
/// the hardware concurrency.
unsigned sweep_thread_count();

int cmd_check_regime(const RunConfig& config, std::ostream& out);

/// Writes the diagnostics CSV, summary JSON and optional snapshots into
/// config.output.dir.
int cmd_run(const RunConfig& config, std::ostream& out, const std::filesystem::path& base_dir = {});

/// Axes from the [sweep] section followed by extra_axes (a repeated name
/// replaces the config's list).
int cmd_sweep(const RunConfig& config, const std::vector<SweepAxis>& extra_axes, bool classify_only,
              std::ostream& out, const std::filesystem::path& base_dir = {});

int cmd_audit(const RunConfig& config, std::ostream& out);

}  // namespace chtx

#endif
