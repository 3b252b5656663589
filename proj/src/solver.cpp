#include "chtx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "chtx/linear.hpp"

namespace chtx {

void SolverConfig::validate() const {
    auto require = [](bool ok, const std::string& msg) {
        if (!ok) throw ParameterError(msg);
    };
    require(std::isfinite(dt) && dt > 0, "solver dt must be positive");
    require(std::isfinite(t_end) && t_end > 0, "solver t_end must be positive");
    require(blowup_threshold > 0, "solver blowup_threshold must be positive");
    require(std::isfinite(dt_min) && dt_min > 0, "solver dt_min must be positive");
    require(dt >= dt_min, "solver dt must not be smaller than dt_min");
    require(std::isfinite(linear_tol) && linear_tol > 0, "solver linear_tol must be positive");
    require(max_linear_iters > 0, "solver max_linear_iters must be positive");
    for (double k : diag_k_set) require(std::isfinite(k) && k >= 2, "diagnostics exponents k must be at least 2");
}

std::vector<double> default_diag_k_set(int n) {
    std::vector<double> ks{2.0, n + 1.0, 2.0 * n, 8.0};
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

std::vector<double> effective_diag_k_set(const SolverConfig& config, int n) {
    return config.diag_k_set.empty() ? default_diag_k_set(n) : config.diag_k_set;
}

bool detect_blowup(const Field& u, const SolverConfig& config) {
    for (double v : u.values()) {
        if (!std::isfinite(v) || v > config.blowup_threshold) return true;
    }
    return false;
}

double positivity_tolerance(const Field& u) { return 1e-12 * u.linf(); }

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::CompletedBounded: return "CompletedBounded";
        case RunStatus::BlowupDetected: return "BlowupDetected";
        case RunStatus::StepCollapse: return "StepCollapse";
    }
    return "Unknown";
}

Field solve_elliptic_signal(const Field& source, double tol, int max_iters, const Field* guess) {
    const ShiftedLaplacian op(source.grid(), 1.0, 1.0);
    Field psi = guess && guess->grid() == source.grid() ? *guess : source;
    op.solve(source, psi, tol, max_iters);
    return psi;
}

Field step_parabolic_signal(const Field& prev, const Field& source, double dt, double tol, int max_iters) {
    require_same_grid(prev, source);
    if (!(dt > 0)) throw std::invalid_argument("step_parabolic_signal: dt must be positive");
    const ShiftedLaplacian op(prev.grid(), 1.0 + dt, dt);
    Field rhs(prev.grid());
    for (std::size_t p = 0; p < rhs.size(); ++p) rhs[p] = prev[p] + dt * source[p];
    Field psi = prev;
    op.solve(rhs, psi, tol, max_iters);
    return psi;
}

Field produce_attractant(const Field& u, const ProductionSpec& spec) {
    const Field up = positive_part(u, positivity_tolerance(u));
    Field out(u.grid());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = eval_f(spec, up[p]);
    return out;
}

Field produce_repellent(const Field& u, const ProductionSpec& spec) {
    const Field up = positive_part(u, positivity_tolerance(u));
    Field out(u.grid());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = eval_g(spec, up[p]);
    return out;
}

Field step_cell(const SimulationState& state, const ModelParams& params, double dt, const SolverConfig& config) {
    const Field& u = state.u;
    require_same_grid(u, state.v);
    require_same_grid(u, state.w);
    const Grid& grid = u.grid();
    const Field up = positive_part(u, positivity_tolerance(u));
    const double nonlocal = integrate_power(up, params.beta);

    Field taxis(grid);
    if (!config.upwind) {
        const Field attract = taxis_divergence(u, state.v, FaceValue::Centered);
        const Field repel = taxis_divergence(u, state.w, FaceValue::Centered);
        for (std::size_t p = 0; p < grid.size(); ++p) taxis[p] = -params.chi * attract[p] + params.xi * repel[p];
    } else {
        // Net drift velocity ∇(χv − ξw), upwinded as a single transport.
        Field potential(grid);
        for (std::size_t p = 0; p < grid.size(); ++p) {
            potential[p] = params.chi * state.v[p] - params.xi * state.w[p];
        }
        const Field drift = taxis_divergence(u, potential, FaceValue::Upwind);
        for (std::size_t p = 0; p < grid.size(); ++p) taxis[p] = -drift[p];
    }

    Field rhs(grid);
    for (std::size_t p = 0; p < grid.size(); ++p) {
        const double growth = std::pow(up[p], params.alpha);
        const double reaction = params.a * growth - params.b * growth * nonlocal;
        rhs[p] = u[p] + dt * (taxis[p] + reaction);
    }

    const ShiftedLaplacian heat(grid, 1.0, dt);
    Field next = rhs;
    if (rhs.all_finite()) heat.solve(rhs, next, config.linear_tol, config.max_linear_iters);
    return next;
}

namespace {

struct Signals {
    Field v;
    Field w;
};

Signals elliptic_signals(const Field& u, const ProductionSpec& spec, const SolverConfig& config,
                         const Signals* guess) {
    Signals s;
    s.v = solve_elliptic_signal(produce_attractant(u, spec), config.linear_tol, config.max_linear_iters,
                                guess ? &guess->v : nullptr);
    s.w = solve_elliptic_signal(produce_repellent(u, spec), config.linear_tol, config.max_linear_iters,
                                guess ? &guess->w : nullptr);
    return s;
}

void require_nonnegative(const Field& f, const char* name) {
    for (double v : f.values()) {
        if (!(v >= 0.0)) throw ParameterError(std::string(name) + " must be nonnegative and finite");
    }
}

}  // namespace

RunOutcome run(const ModelParams& params, const ProductionSpec& spec, const Grid& grid, const Field& u0,
               const Field& v0, const Field& w0, const SolverConfig& config, const StepObserver& observer) {
    params.validate_for_simulation();
    spec.validate();
    config.validate();
    if (params.n != grid.dim()) throw ParameterError("params.n must equal the grid dimension for a simulation");
    if (!(u0.grid() == grid)) throw std::invalid_argument("u0 does not live on the simulation grid");
    require_nonnegative(u0, "u0");
    if (!(config.blowup_threshold > u0.linf())) {
        throw ParameterError("blowup_threshold must exceed the initial sup norm of u0");
    }

    SimulationState state;
    state.u = u0;
    if (params.tau == 1) {
        if (!(v0.grid() == grid) || !(w0.grid() == grid)) {
            throw std::invalid_argument("tau = 1 needs v0 and w0 on the simulation grid");
        }
        require_nonnegative(v0, "v0");
        require_nonnegative(w0, "w0");
        state.v = v0;
        state.w = w0;
    } else {
        Signals s = elliptic_signals(u0, spec, config, nullptr);
        state.v = std::move(s.v);
        state.w = std::move(s.w);
    }

    RunOutcome outcome;
    auto push_record = [&](const SimulationState& st) {
        DiagnosticsRecord rec = record(st, params, config);
        outcome.mass_max = std::max(outcome.mass_max, rec.mass);
        outcome.sup_linf_u = std::max(outcome.sup_linf_u, rec.linf_u);
        if (observer) observer(st, rec);
        outcome.diagnostics.push_back(std::move(rec));
    };
    push_record(state);

    double dt = config.dt;
    const double t_end = config.t_end;
    outcome.status = RunStatus::CompletedBounded;
    while (t_end - state.t > 1e-9 * dt) {
        const double h = std::min(dt, t_end - state.t);

        SimulationState trial;
        trial.t = state.t;
        trial.u = state.u;
        if (params.tau == 1) {
            trial.v = step_parabolic_signal(state.v, produce_attractant(state.u, spec), h, config.linear_tol,
                                            config.max_linear_iters);
            trial.w = step_parabolic_signal(state.w, produce_repellent(state.u, spec), h, config.linear_tol,
                                            config.max_linear_iters);
        } else {
            trial.v = state.v;
            trial.w = state.w;
        }
        Field next = step_cell(trial, params, h, config);

        const bool blown = detect_blowup(next, config);
        if (!blown && next.min() < -positivity_tolerance(next)) {
            ++outcome.rejected_steps;
            dt *= 0.5;
            if (dt < config.dt_min) {
                outcome.status = RunStatus::StepCollapse;
                break;
            }
            continue;
        }

        state.t = h == t_end - state.t ? t_end : state.t + h;
        state.u = std::move(next);
        state.last_dt = h;
        ++state.step_count;
        if (params.tau == 1) {
            state.v = std::move(trial.v);
            state.w = std::move(trial.w);
        } else if (!blown) {
            Signals guess{std::move(trial.v), std::move(trial.w)};
            Signals s = elliptic_signals(state.u, spec, config, &guess);
            state.v = std::move(s.v);
            state.w = std::move(s.w);
        }
        push_record(state);
        if (blown) {
            outcome.status = RunStatus::BlowupDetected;
            break;
        }
    }
    outcome.t_final = state.t;
    outcome.final_state = std::move(state);
    return outcome;
}

}  // namespace chtx
