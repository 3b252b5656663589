// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
//   acceptance <path-to-chtx-binary>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "chtx/commands.hpp"
#include "chtx/config.hpp"
#include "chtx/diagnostics.hpp"
#include "chtx/initial_data.hpp"
#include "chtx/solver.hpp"
#include "oracles.hpp"

using namespace chtx;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << "\n    failed: " << what;
        }
    }
};

fs::path source_dir() { return fs::path(CHTX_SOURCE_DIR); }

ProductionSpec power(double ell, double rho, double k1 = 1, double k2 = 1) {
    ProductionSpec s;
    s.ell = ell;
    s.rho = rho;
    s.k1 = k1;
    s.k2 = k2;
    return s;
}

ModelParams model(int tau, int n, double chi, double xi, double a, double b, double alpha, double beta) {
    ModelParams p;
    p.tau = tau;
    p.n = n;
    p.chi = chi;
    p.xi = xi;
    p.a = a;
    p.b = b;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

// ---------------------------------------------------------------------------

struct Tuple {
    int tau, n;
    double alpha, beta, ell, rho;
    const char* expect;  // hand-evaluated "PE-A", "PP-B", "None", ...
};

void criterion_classifier(Check& c) {
    const Tuple cases[] = {
        // first theorem, case A
        {0, 2, 2.0, 1.5, 0.5, 1.2, "PE-A"},
        {0, 2, 2.0, 0.8, 0.5, 1.2, "None"},
        {0, 2, 2.0, 1.0, 0.5, 1.2, "None"},  // β on the strict boundary
        {0, 1, 2.0, 1.5, 1.0, 1.2, "PE-A"},  // ℓ = α − 1 admitted by ≤
        // first theorem, case B
        {0, 2, 1.5, 3.0, 1.0, 1.5, "PE-B"},
        {0, 2, 1.5, 1.5, 1.0, 1.5, "None"},  // β equals the case-B bound
        {0, 1, 1.25, 1.5, 1.0, 2.0, "PE-B"},
        {0, 1, 2.5, 5.0, 2.0, 1.5, "None"},  // α − 1 = min(ℓ, ρ) fails <
        // second theorem, case A
        {1, 3, 3.0, 3.5, 1.0, 1.5, "PP-A"},
        {1, 1, 2.5, 1.5, 1.0, 1.5, "PP-A"},  // α − 1 = max(ρ, ℓ) admitted by ≥
        {1, 3, 3.0, 3.0, 1.0, 1.5, "None"},  // β on the strict boundary
        {1, 2, 2.4, 2.0, 1.0, 1.5, "None"},
        // second theorem, case B
        {1, 1, 1.5, 1.5, 1.0, 1.2, "PP-B"},
        {1, 1, 1.5, 1.375, 1.0, 1.25, "None"},  // β equals the case-B bound
        {1, 2, 1.25, 3.0, 1.5, 1.5, "PP-B"},
        {1, 1, 2.0, 5.0, 1.0, 1.5, "None"},  // α − 1 = min(ρ, ℓ) fails <
    };
    for (const auto& t : cases) {
        const auto v = classify_regime(model(t.tau, t.n, 1, 1, 1, 1, t.alpha, t.beta), power(t.ell, t.rho));
        const bool a = t.tau == 0 ? oracle::pe_a(t.n, t.alpha, t.beta, t.ell, t.rho)
                                  : oracle::pp_a(t.n, t.alpha, t.beta, t.ell, t.rho);
        const bool b = t.tau == 0 ? oracle::pe_b(t.n, t.alpha, t.beta, t.ell, t.rho)
                                  : oracle::pp_b(t.n, t.alpha, t.beta, t.ell, t.rho);
        const std::string prefix = t.tau == 0 ? "PE-" : "PP-";
        const std::string oracle_label = a ? prefix + "A" : (b ? prefix + "B" : "None");
        const std::string got =
            v.theorem == Theorem::None ? "None" : to_string(v.theorem) + "-" + to_string(v.case_label);
        std::ostringstream what;
        what << "tau=" << t.tau << " n=" << t.n << " alpha=" << t.alpha << " beta=" << t.beta << " ell=" << t.ell
             << " rho=" << t.rho << ": got " << got << ", oracle " << oracle_label << ", table " << t.expect;
        c.expect(got == oracle_label && oracle_label == t.expect, what.str());
    }

    struct Cmp {
        int n;
        double alpha, beta;
        ComparisonRegime expect;
    };
    const Cmp cmps[] = {
        {1, 1.5, 2.5, ComparisonRegime::Subquadratic},  {1, 1.5, 1.0, ComparisonRegime::None},
        {2, 2.0, 1.5, ComparisonRegime::Superquadratic}, {2, 3.0, 1.5, ComparisonRegime::None},
        {1, 1.0, 2.6, ComparisonRegime::Subquadratic},  {3, 2.0, 1.5, ComparisonRegime::None},
    };
    for (const auto& t : cmps) {
        const auto v = classify_regime(model(1, t.n, 1, 1, 1, 1, t.alpha, t.beta), power(1.0, 1.5));
        ComparisonRegime want = ComparisonRegime::None;
        if (oracle::subquadratic(t.n, t.alpha, t.beta)) want = ComparisonRegime::Subquadratic;
        if (oracle::superquadratic(t.n, t.alpha, t.beta)) want = ComparisonRegime::Superquadratic;
        std::ostringstream what;
        what << "comparison n=" << t.n << " alpha=" << t.alpha << " beta=" << t.beta << ": got "
             << to_string(v.comparison) << ", oracle " << to_string(want) << ", table " << to_string(t.expect);
        c.expect(v.comparison == want && want == t.expect, what.str());
    }
}

// ---------------------------------------------------------------------------

void criterion_uniform_oracle(Check& c) {
    const Grid g = Grid::interval(1.0, 64);
    const double a = 1, b = 0.5, alpha = 1.5, beta = 1;
    const ProductionSpec spec = power(0.5, 1.2);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 5;
    const double exact = oracle::uniform_ode(a, b, alpha, beta, g.measure(), 1.0, 5.0);
    for (int tau : {0, 1}) {
        const auto p = model(tau, 1, 1, 1, a, b, alpha, beta);
        const Field u0(g, 1.0);
        const Field v0(g, eval_f(spec, 1.0));
        const Field w0(g, eval_g(spec, 1.0));
        const RunOutcome out = run(p, spec, g, u0, v0, w0, cfg);
        const double got = out.final_state.u.linf();
        const double rel = oracle::relative_error(got, exact);
        std::ostringstream what;
        what << "tau=" << tau << ": |u|_inf=" << got << " oracle=" << exact << " rel=" << rel;
        c.expect(out.status == RunStatus::CompletedBounded && out.t_final == 5.0, what.str() + " (status)");
        c.expect(rel < 1e-4, what.str());
        c.notes << "\n    tau=" << tau << " rel err " << rel;
    }
}

// ---------------------------------------------------------------------------

void criterion_manufactured(Check& c) {
    auto error_at = [](std::size_t n) {
        const Grid g = Grid::interval(1.0, n);
        const Field src =
            Field::from_function(g, [](double x, double) { return (1 + M_PI * M_PI) * std::cos(M_PI * x); });
        const Field psi = solve_elliptic_signal(src, 1e-12, 10000);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(psi[i] - std::cos(M_PI * g.coordinate(0, i))));
        return std::pair{err, g.spacing(0)};
    };
    const auto [e64, h64] = error_at(64);
    const auto [e128, h128] = error_at(128);
    const double order = std::log(e64 / e128) / std::log(h64 / h128);
    c.notes << "\n    err64=" << e64 << " err128=" << e128 << " order=" << order;
    c.expect(order >= 1.9, "observed order below 1.9");
    c.expect(e128 < 1e-3, "max error at counts=128 not below 1e-3");
}

// ---------------------------------------------------------------------------

void criterion_cancellation(Check& c) {
    const Grid g = Grid::interval(1.0, 64);
    const ProductionSpec same = power(1.5, 1.5, 1, 1);  // f = g
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const Field u0 = gaussian_bump(g, {0.4}, 0.1, 2.0, 0.3);
    const Field s0 = perturbed_constant(g, 0.5, 0.3, 17);
    for (int tau : {0, 1}) {
        auto trajectory = [&](double coeff) {
            std::vector<Field> us;
            run(model(tau, 1, coeff, coeff, 1, 1, 2, 1.5), same, g, u0, s0, s0, cfg,
                [&](const SimulationState& st, const DiagnosticsRecord&) { us.push_back(st.u); });
            return us;
        };
        const auto with = trajectory(1.0);
        const auto without = trajectory(0.0);
        c.expect(with.size() == 1001, "tau=" + std::to_string(tau) + ": expected 1000 steps");
        c.expect(with == without, "tau=" + std::to_string(tau) + ": trajectories differ");
    }
}

// ---------------------------------------------------------------------------

void criterion_boundedness(Check& c) {
    const RunConfig pe = load_config(source_dir() / "configs" / "pe_a_bounded.cfg");
    const auto verdict = classify_regime(pe.params, pe.production);
    c.expect(verdict.theorem == Theorem::PE && verdict.case_label == CaseLabel::A, "demo is not in PE case A");
    c.expect(pe.params.n == 1 && pe.params.alpha == 2 && pe.params.beta == 1.5 && pe.production.ell == 0.5 &&
                 pe.production.rho == 1.2 && pe.domain.counts[0] == 128 && pe.solver.t_end == 20 &&
                 pe.initial_u.kind == InitialKind::GaussianBump,
             "PE demo parameters differ from the criterion");
    const auto t0 = std::chrono::steady_clock::now();
    const RunInputs in = build_run_inputs(pe, source_dir() / "configs");
    const RunOutcome out = run(pe.params, pe.production, in.grid, in.u0, in.v0, in.w0, pe.solver);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(out.status == RunStatus::CompletedBounded, "PE run status " + to_string(out.status));
    const auto report = mass_bound_monitor(out.diagnostics, pe.params);
    c.expect(report.violations.empty(), "decay mechanism violated at " + std::to_string(report.violations.size()) +
                                            " records");
    c.expect(report.mass_within_mechanism_bound, "running mass exceeds the mechanism bound");
    c.expect(std::isfinite(out.sup_linf_u), "sup norm not finite");
    double t_at_sup = -1;
    for (const auto& r : out.diagnostics) {
        if (r.linf_u == out.sup_linf_u) {
            t_at_sup = r.t;
            break;
        }
    }
    c.expect(t_at_sup >= 0 && t_at_sup < pe.solver.t_end / 2, "sup norm attained after t_end/2");
    c.expect(secs < 60, "PE run slower than 60 s");
    c.notes << "\n    PE(A): sup|u|=" << out.sup_linf_u << " at t=" << t_at_sup << ", M0=" << report.empirical_m0
            << ", " << secs << " s";

    const RunConfig pp = load_config(source_dir() / "configs" / "pp_b_bounded.cfg");
    const auto vpp = classify_regime(pp.params, pp.production);
    c.expect(vpp.theorem == Theorem::PP && vpp.case_label == CaseLabel::B, "demo is not in PP case B");
    c.expect(pp.params.tau == 1 && pp.params.n == 1 && pp.params.alpha == 1.5 && pp.params.beta == 1.5 &&
                 pp.production.ell == 1 && pp.production.rho == 1.2,
             "PP demo parameters differ from the criterion");
    const auto t1 = std::chrono::steady_clock::now();
    const RunInputs pin = build_run_inputs(pp, source_dir() / "configs");
    const RunOutcome pout = run(pp.params, pp.production, pin.grid, pin.u0, pin.v0, pin.w0, pp.solver);
    const double psecs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
    c.expect(pout.status == RunStatus::CompletedBounded, "PP run status " + to_string(pout.status));
    c.expect(psecs < 120, "PP run slower than 120 s");
    const auto preport = mass_bound_monitor(pout.diagnostics, pp.params);
    c.notes << "\n    PP(B): sup|u|=" << pout.sup_linf_u << ", monitor " << (preport.ok() ? "ok" : "flagged") << ", "
            << psecs << " s";
}

// ---------------------------------------------------------------------------

void criterion_identities(Check& c) {
    const std::vector<Grid> grids{Grid::interval(1.0, 64), Grid::interval(3.0, 101),
                                  Grid::rectangle(1.0, 1.0, 32, 32), Grid::rectangle(2.0, 0.5, 40, 17)};
    double worst_div = 0;
    double worst_adj = 0;
    for (int i = 0; i < 20; ++i) {
        const Grid& g = grids[i % grids.size()];
        const Field phi = random_cosine_field(g, 1000 + i, 6);
        const Field psi = random_cosine_field(g, 2000 + i, 6);
        const Field lphi = laplacian_neumann(phi);
        const double div = std::abs(integrate(lphi));
        const double adj = std::abs(weighted_dot(lphi, psi) - weighted_dot(phi, laplacian_neumann(psi)));
        worst_div = std::max(worst_div, div);
        worst_adj = std::max(worst_adj, adj);
    }
    c.notes << "\n    max |∫Δφ|=" << worst_div << ", max |<Δφ,ψ>-<φ,Δψ>|=" << worst_adj;
    c.expect(worst_div <= 1e-12, "discrete divergence theorem beyond 1e-12");
    c.expect(worst_adj <= 1e-10, "self-adjointness beyond 1e-10");

    double worst_mass = 0;
    for (const Grid& g : {Grid::interval(1.0, 128), Grid::rectangle(1.0, 1.0, 48, 48)}) {
        SolverConfig cfg;
        cfg.dt = 1e-3;
        cfg.t_end = 0.5;
        const Field u0 = perturbed_constant(g, 1.0, 0.9, 5, 6);
        const RunOutcome out = run(model(0, g.dim(), 0, 0, 0, 0, 1, 1), power(1, 2), g, u0, Field(), Field(), cfg);
        const double m0 = out.diagnostics.front().mass;
        for (const auto& r : out.diagnostics) worst_mass = std::max(worst_mass, std::abs(r.mass - m0) / m0);
    }
    c.notes << "\n    max relative mass drift=" << worst_mass;
    c.expect(worst_mass <= 1e-12, "pure-diffusion mass drift beyond 1e-12");
}

// ---------------------------------------------------------------------------

void criterion_theta(Check& c) {
    int checked = 0;
    for (double rho : {1.1, 2.0, 4.0}) {
        for (int n : {1, 2, 3}) {
            const double floor_k = gn_k_floor(rho, n);
            for (int k = 2; k <= 64; ++k) {
                if (k <= floor_k) continue;
                ++checked;
                const auto th = gn_theta_lemma21(k, rho, n);
                const double t23 = gn_theta_lemma23(k, n);
                std::ostringstream what;
                what << "k=" << k << " rho=" << rho << " n=" << n;
                c.expect(th.theta > 0 && th.theta < 1, what.str() + " theta outside (0,1)");
                c.expect(th.exponent < 1, what.str() + " exponent not below 1");
                c.expect(t23 > 0 && t23 < 1, what.str() + " L^k theta outside (0,1)");
                c.expect(th.in_unit_interval, what.str() + " flag unset");
            }
        }
    }
    c.notes << "\n    " << checked << " (k, rho, n) triples above the floor";
    c.expect(checked > 0, "no triples checked");
}

// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int shell(const std::string& cmd) {
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion_determinism(Check& c, const std::string& binary) {
    const fs::path root = fs::temp_directory_path() / "chtx_acceptance_determinism";
    fs::remove_all(root);
    const fs::path configs = source_dir() / "configs";
    struct Demo {
        std::string config;
        std::string command;
        std::vector<std::string> outputs;
        int exit_code;
    };
    const std::vector<Demo> demos{
        {"pe_a_bounded.cfg", "run", {"diagnostics.csv", "summary.json"}, 0},
        {"pp_b_bounded.cfg", "run", {"diagnostics.csv", "summary.json"}, 0},
        {"growth_blowup.cfg", "run", {"diagnostics.csv", "summary.json"}, 3},
        {"sweep_alpha_beta.cfg", "sweep", {"sweep.csv"}, 0},
    };
    for (const auto& d : demos) {
        // Identical command lines; the echoed config includes the output dir.
        const fs::path out = root / "out";
        const std::string cmd = "\"" + binary + "\" " + d.command + " \"" + (configs / d.config).string() +
                                "\" --out \"" + out.string() + "\" > /dev/null";
        for (int rep = 0; rep < 2; ++rep) {
            fs::remove_all(out);
            const int rc = shell(cmd);
            c.expect(rc == d.exit_code, d.config + ": exit code " + std::to_string(rc));
            fs::create_directories(root / d.config);
            fs::rename(out, root / d.config / std::to_string(rep));
        }
        for (const auto& file : d.outputs) {
            const std::string a = slurp(root / d.config / "0" / file);
            const std::string b = slurp(root / d.config / "1" / file);
            c.expect(!a.empty(), d.config + "/" + file + " missing or empty");
            c.expect(a == b, d.config + "/" + file + " differs between invocations");
        }
    }
    for (int rep = 0; rep < 2; ++rep) {
        const std::string cmd = "\"" + binary + "\" audit \"" + (configs / "audit.cfg").string() + "\" > \"" +
                                (root / ("audit" + std::to_string(rep) + ".txt")).string() + "\"";
        c.expect(shell(cmd) == 0, "audit exit code");
    }
    const std::string a0 = slurp(root / "audit0.txt");
    c.expect(!a0.empty() && a0 == slurp(root / "audit1.txt"), "audit report differs between invocations");
    fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-chtx>\n";
        return 2;
    }
    const std::string binary = argv[1];

    struct Criterion {
        int id;
        std::string title;
        double budget_s;  // 0: no runtime bound
        std::function<void(Check&)> body;
    };
    const std::vector<Criterion> criteria{
        {1, "regime classifier truth table", 1.0, criterion_classifier},
        {2, "uniform state matches the scalar ODE oracle", 30.0, criterion_uniform_oracle},
        {3, "manufactured elliptic solution, order >= 1.9", 10.0, criterion_manufactured},
        {4, "attraction-repulsion cancellation is bitwise exact", 0.0, criterion_cancellation},
        {5, "bounded runs in PE(A) and PP(B)", 180.0, criterion_boundedness},
        {6, "conservation and operator identities", 0.0, criterion_identities},
        {7, "interpolation exponent sweep", 1.0, criterion_theta},
        {8, "byte-identical outputs across invocations", 0.0,
         [&](Check& c) { criterion_determinism(c, binary); }},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.budget_s > 0) check.expect(secs < cr.budget_s, "runtime over " + std::to_string(cr.budget_s) + " s");
        if (!check.ok) ++failures;
        std::printf("[%s] %d %s (%.3f s)%s\n", check.ok ? "PASS" : "FAIL", cr.id, cr.title.c_str(), secs,
                    check.notes.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
