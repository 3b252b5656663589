#ifndef CHTX_DIAGNOSTICS_HPP
#define CHTX_DIAGNOSTICS_HPP

/**
 * @file diagnostics.hpp
 * @brief Functionals monitored along a trajectory (mass, L^k norms, the
 * energy e^{τt}∫u^k, gradient terms) and the Gagliardo–Nirenberg exponent
 * audits behind the L^k estimates.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "chtx/model.hpp"
#include "chtx/state.hpp"

namespace chtx {

struct DiagnosticsRecord {
    double t = 0;
    double dt_used = 0;
    double mass = 0;  ///< ∫u
    double linf_u = 0;
    double linf_v = 0;
    double linf_w = 0;
    std::vector<double> k_values;
    std::vector<double> lk_norms;    ///< (∫u^k)^{1/k}, aligned with k_values
    std::vector<double> phi;         ///< e^{τt} ∫u^k
    std::vector<double> grad_terms;  ///< ∫|∇u^{k/2}|²
    double nonlocal = 0;             ///< ∫u^β
    bool blowup_flag = false;

    bool operator==(const DiagnosticsRecord&) const = default;
};

/// Evaluates every monitored functional on the state. Densities below
/// −positivity_tolerance(u) raise PositivityError.
DiagnosticsRecord record(const SimulationState& state, const ModelParams& params, const SolverConfig& config);

// ---------------------------------------------------------------------------
// Gagliardo–Nirenberg exponents
// ---------------------------------------------------------------------------

struct ThetaL21 {
    double theta = 0;     ///< k(1 − 1/ρ) / (k − 1 + 2/n)
    double exponent = 0;  ///< (k + ρ)θ / k
    bool in_unit_interval = false;  ///< θ and exponent both in (0,1)
};

/// Exponent for the L^ρ interpolation against ∇u^{k/2} and ∫u.
ThetaL21 gn_theta_lemma21(double k, double rho, int n);

/// (k/2 − 1/2) / (k/2 − 1/2 + 1/n), the exponent for ∫u^k.
double gn_theta_lemma23(double k, int n);

/// Smallest k above which gn_theta_lemma21 gives θ ∈ (0,1) and
/// (k+ρ)θ/k < 1: max(1, ρ² − 2ρ/n). Inclusive bound is not admissible.
double gn_k_floor(double rho, int n);

struct GNAudit {
    double k = 0;
    double rho = 0;
    int n = 1;
    double theta = 0;
    double exponent = 0;          ///< (k+ρ)θ/k
    double lhs = 0;               ///< (∫φ^ρ)^{(k+ρ)/ρ}
    double gradient_piece = 0;    ///< ∫|∇φ^{k/2}|²
    double mass_piece = 0;        ///< ∫φ
    double rhs_gradient_term = 0; ///< gradient_piece^{exponent} · mass^{(k+ρ)(1−θ)}
    double rhs_mass_term = 0;     ///< mass^{k+ρ}
    double implied_constant = 0;  ///< lhs / (rhs_gradient_term + rhs_mass_term)
};

/// Throws std::invalid_argument on an identically zero field and
/// PositivityError on negative values.
GNAudit audit_gn_on_field(const Field& phi, double k, double rho, int n);

// ---------------------------------------------------------------------------
// Mass bound monitoring
// ---------------------------------------------------------------------------

struct MassBoundReport {
    double empirical_m0 = 0;  ///< running max of ∫u over the series
    std::vector<std::size_t> violations;  ///< record indices i breaking the decay check into i+1
    /// Maximal runs [t_start, t_end] of records with ∫u^β < a/b.
    std::vector<std::pair<double, double>> growth_intervals;
    /// First time the series enters the damping region after a growth run.
    std::optional<double> growth_exit_time;
    /// max(∫u₀, masses reached by steps taken from the growth region).
    double mechanism_bound = 0;
    bool mass_within_mechanism_bound = true;

    bool ok() const { return violations.empty() && mass_within_mechanism_bound; }
};

/// Checks that whenever ∫u^β ≥ a/b at a record, the next record's mass does
/// not exceed mass + dt·1e-8·mass, and that the running mass maximum is
/// explained by steps taken from the growth region.
MassBoundReport mass_bound_monitor(const std::vector<DiagnosticsRecord>& series, const ModelParams& params);

}  // namespace chtx

#endif
