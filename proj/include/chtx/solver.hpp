#ifndef CHTX_SOLVER_HPP
#define CHTX_SOLVER_HPP

/**
 * @file solver.hpp
 * @brief Time integration of the coupled cell/attractant/repellent system.
 *
 * One step from (u, v, w) at time t:
 *   τ = 1: v⁺ = (I + dt(I − Δ_h))⁻¹ (v + dt f(u)), same for w with g;
 *   τ = 0: v, w already solve (I − Δ_h)ψ = f(u), g(u) for the current u;
 *   u⁺ = (I − dtΔ_h)⁻¹ (u + dt R),
 *        R = −χ ∇·(u∇v) + ξ ∇·(u∇w) + a u^α − b u^α ∫u^β
 * with the nonlocal integral frozen at the old u. A step whose u⁺ dips
 * below −1e-12‖u⁺‖∞ is rejected and retried with dt/2 for the rest of the
 * run; dt < dt_min ends the run as a step collapse.
 */

#include <functional>
#include <vector>

#include "chtx/diagnostics.hpp"
#include "chtx/grid.hpp"
#include "chtx/model.hpp"
#include "chtx/state.hpp"

namespace chtx {

/// (I − Δ_h)ψ = source. `guess` seeds the iteration when given.
Field solve_elliptic_signal(const Field& source, double tol, int max_iters, const Field* guess = nullptr);

/// One implicit Euler step of ψ_t = Δψ − ψ + source.
Field step_parabolic_signal(const Field& prev, const Field& source, double dt, double tol, int max_iters);

/// Pointwise production f(u) / g(u) on the positive part of u.
Field produce_attractant(const Field& u, const ProductionSpec& spec);
Field produce_repellent(const Field& u, const ProductionSpec& spec);

/// IMEX update of u using state.u, state.v, state.w. Returns the candidate;
/// acceptance (positivity, blow-up) is decided by the caller.
Field step_cell(const SimulationState& state, const ModelParams& params, double dt, const SolverConfig& config);

enum class RunStatus { CompletedBounded, BlowupDetected, StepCollapse };

std::string to_string(RunStatus status);

struct RunOutcome {
    RunStatus status = RunStatus::CompletedBounded;
    double t_final = 0;
    double sup_linf_u = 0;
    double mass_max = 0;
    long rejected_steps = 0;
    std::vector<DiagnosticsRecord> diagnostics;  ///< t = 0 plus one per accepted step
    SimulationState final_state;
};

/// Called after the initial record and after every accepted step.
using StepObserver = std::function<void(const SimulationState&, const DiagnosticsRecord&)>;

/// Integrates from (u0, v0, w0) to config.t_end, blow-up or step collapse.
/// For τ = 0 the inputs v0, w0 are ignored and may be empty fields.
RunOutcome run(const ModelParams& params, const ProductionSpec& spec, const Grid& grid, const Field& u0,
               const Field& v0, const Field& w0, const SolverConfig& config, const StepObserver& observer = {});

}  // namespace chtx

#endif
