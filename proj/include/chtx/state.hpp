#ifndef CHTX_STATE_HPP
#define CHTX_STATE_HPP

#include <vector>

#include "chtx/grid.hpp"

namespace chtx {

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double blowup_threshold = 1e8;  ///< absolute L∞ ceiling for u
    double dt_min = 1e-10;          ///< step collapse below this
    double linear_tol = 1e-10;      ///< relative residual of every linear solve
    int max_linear_iters = 10000;
    bool upwind = false;            ///< first-order upwind taxis fluxes
    std::vector<double> diag_k_set; ///< empty: default_diag_k_set(n)

    /// Throws ParameterError on non-positive steps/horizon/threshold,
    /// dt < dt_min, or a diagnostics exponent below 2.
    void validate() const;

    bool operator==(const SolverConfig&) const = default;
};

/// {2, n+1, 2n, 8}, sorted, duplicates removed.
std::vector<double> default_diag_k_set(int n);

/// The exponents actually monitored for a run in dimension n.
std::vector<double> effective_diag_k_set(const SolverConfig& config, int n);

struct SimulationState {
    double t = 0.0;
    Field u;
    Field v;
    Field w;
    long step_count = 0;
    double last_dt = 0.0;
};

/// True iff some node of u exceeds the threshold or is not finite.
bool detect_blowup(const Field& u, const SolverConfig& config);

/// Round-off allowance for negative densities: 1e-12·‖u‖∞.
double positivity_tolerance(const Field& u);

}  // namespace chtx

#endif
