#include "chtx/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace chtx {

DiagnosticsRecord record(const SimulationState& state, const ModelParams& params, const SolverConfig& config) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.dt_used = state.last_dt;
    rec.blowup_flag = detect_blowup(state.u, config);
    rec.mass = integrate(state.u);
    rec.linf_u = state.u.linf();
    rec.linf_v = state.v.size() ? state.v.linf() : 0.0;
    rec.linf_w = state.w.size() ? state.w.linf() : 0.0;

    // A blown-up state is recorded as-is; it is the last record of the run.
    const double tol = rec.blowup_flag ? std::numeric_limits<double>::infinity() : positivity_tolerance(state.u);
    const Field u = positive_part(state.u, tol);
    rec.nonlocal = integrate_power(u, params.beta);
    const double growth = params.tau == 1 ? std::exp(state.t) : 1.0;
    rec.k_values = effective_diag_k_set(config, params.n);
    for (double k : rec.k_values) {
        const double integral = integrate_power(u, k);
        rec.lk_norms.push_back(std::pow(integral, 1.0 / k));
        rec.phi.push_back(growth * integral);
        rec.grad_terms.push_back(grad_half_power_norm(u, k));
    }
    return rec;
}

ThetaL21 gn_theta_lemma21(double k, double rho, int n) {
    ThetaL21 out;
    out.theta = k * (1.0 - 1.0 / rho) / (k - 1.0 + 2.0 / n);
    out.exponent = (k + rho) * out.theta / k;
    out.in_unit_interval = out.theta > 0.0 && out.theta < 1.0 && out.exponent > 0.0 && out.exponent < 1.0;
    return out;
}

double gn_theta_lemma23(double k, int n) {
    const double num = 0.5 * k - 0.5;
    return num / (num + 1.0 / n);
}

double gn_k_floor(double rho, int n) {
    // (k+ρ)θ/k < 1  ⇔  k > ρ² − 2ρ/n;  θ < 1  ⇔  k > ρ(1 − 2/n), implied since ρ > 1.
    return std::max(1.0, rho * rho - 2.0 * rho / n);
}

GNAudit audit_gn_on_field(const Field& phi, double k, double rho, int n) {
    if (std::all_of(phi.values().begin(), phi.values().end(), [](double v) { return v == 0.0; })) {
        throw std::invalid_argument("audit_gn_on_field: field is identically zero");
    }
    GNAudit audit;
    audit.k = k;
    audit.rho = rho;
    audit.n = n;
    const ThetaL21 th = gn_theta_lemma21(k, rho, n);
    audit.theta = th.theta;
    audit.exponent = th.exponent;
    audit.lhs = std::pow(integrate_power(phi, rho), (k + rho) / rho);
    audit.gradient_piece = grad_half_power_norm(phi, k);
    audit.mass_piece = integrate(phi);
    audit.rhs_gradient_term =
        std::pow(audit.gradient_piece, th.exponent) * std::pow(audit.mass_piece, (k + rho) * (1.0 - th.theta));
    audit.rhs_mass_term = std::pow(audit.mass_piece, k + rho);
    audit.implied_constant = audit.lhs / (audit.rhs_gradient_term + audit.rhs_mass_term);
    return audit;
}

MassBoundReport mass_bound_monitor(const std::vector<DiagnosticsRecord>& series, const ModelParams& params) {
    if (series.empty()) throw std::invalid_argument("mass_bound_monitor: empty series");
    MassBoundReport report;
    const double threshold = params.b > 0.0 ? params.a / params.b : std::numeric_limits<double>::infinity();

    report.mechanism_bound = series.front().mass;
    bool in_growth = false;
    double growth_start = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& rec = series[i];
        report.empirical_m0 = std::max(report.empirical_m0, rec.mass);
        const bool damping = rec.nonlocal >= threshold;
        if (!damping) {
            if (!in_growth) growth_start = rec.t;
            in_growth = true;
        } else if (in_growth) {
            report.growth_intervals.emplace_back(growth_start, series[i - 1].t);
            if (!report.growth_exit_time) report.growth_exit_time = rec.t;
            in_growth = false;
        }
        if (i + 1 == series.size()) continue;
        const auto& next = series[i + 1];
        if (damping) {
            const double allowance = next.dt_used * 1e-8 * rec.mass;
            if (next.mass > rec.mass + allowance) report.violations.push_back(i);
        } else {
            report.mechanism_bound = std::max(report.mechanism_bound, next.mass);
        }
    }
    if (in_growth) report.growth_intervals.emplace_back(growth_start, series.back().t);

    const double horizon = series.back().t - series.front().t;
    const double slack = 1.0 + 1e-8 * (horizon + 1.0);
    report.mass_within_mechanism_bound = report.empirical_m0 <= report.mechanism_bound * slack;
    return report;
}

}  // namespace chtx
