#include "chtx/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "chtx/diagnostics.hpp"
#include "chtx/initial_data.hpp"
#include "chtx/number_format.hpp"
#include "chtx/snapshot.hpp"

namespace chtx {

namespace {

nlohmann::json margin_json(const Margin& m) {
    return {{"group", m.group},   {"name", m.name},   {"lhs", m.lhs},
            {"rhs", m.rhs},       {"slack", m.slack}, {"relation", to_string(m.relation)},
            {"satisfied", m.satisfied}};
}

std::string margin_line(const Margin& m) {
    std::ostringstream out;
    out << "  [" << m.group << "] " << m.name << ": lhs=" << format_number(m.lhs) << " rhs=" << format_number(m.rhs)
        << " slack=" << format_number(m.slack) << (m.satisfied ? " ok" : " VIOLATED");
    return out.str();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string padded_step(long step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06ld", step);
    return buf;
}

std::string k_label(double k) { return format_number(k); }

}  // namespace

int exit_code_for(RunStatus status) {
    switch (status) {
        case RunStatus::CompletedBounded: return exit_code::ok;
        case RunStatus::BlowupDetected: return exit_code::blowup;
        case RunStatus::StepCollapse: return exit_code::step_collapse;
    }
    return exit_code::failure;
}

std::string format_verdict(const RegimeVerdict& v) {
    std::ostringstream out;
    out << "verdict: ";
    if (v.theorem == Theorem::None) {
        out << "None\n";
    } else {
        out << to_string(v.theorem) << " case " << to_string(v.case_label) << "\n";
    }
    out << "both_cases: " << (v.both_cases ? "true" : "false") << "\n";
    for (const auto& why : v.assumption_violations) out << "assumption violated: " << why << "\n";
    out << "margins:\n";
    for (const auto& m : v.margins) out << margin_line(m) << "\n";
    out << "comparison: " << to_string(v.comparison) << "\n";
    for (const auto& m : v.comparison_margins) out << margin_line(m) << "\n";
    return out.str();
}

nlohmann::json verdict_json(const RegimeVerdict& v) {
    nlohmann::json margins = nlohmann::json::array();
    for (const auto& m : v.margins) margins.push_back(margin_json(m));
    nlohmann::json comparison = nlohmann::json::array();
    for (const auto& m : v.comparison_margins) comparison.push_back(margin_json(m));
    return {{"theorem", to_string(v.theorem)},
            {"case", to_string(v.case_label)},
            {"both_cases", v.both_cases},
            {"margins", margins},
            {"comparison", to_string(v.comparison)},
            {"comparison_margins", comparison},
            {"assumption_violations", v.assumption_violations}};
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series) {
    std::ostringstream out;
    const std::vector<double> ks = series.empty() ? std::vector<double>{} : series.front().k_values;
    out << "t,dt_used,mass,linf_u,linf_v,linf_w,nonlocal_beta";
    for (double k : ks) out << ",lk_norm_" << k_label(k) << ",phi_" << k_label(k) << ",grad_term_" << k_label(k);
    out << ",blowup_flag\n";
    for (const auto& r : series) {
        out << format_number(r.t) << ',' << format_number(r.dt_used) << ',' << format_number(r.mass) << ','
            << format_number(r.linf_u) << ',' << format_number(r.linf_v) << ',' << format_number(r.linf_w) << ','
            << format_number(r.nonlocal);
        for (std::size_t i = 0; i < r.k_values.size(); ++i) {
            out << ',' << format_number(r.lk_norms[i]) << ',' << format_number(r.phi[i]) << ','
                << format_number(r.grad_terms[i]);
        }
        out << ',' << (r.blowup_flag ? 1 : 0) << '\n';
    }
    return out.str();
}

nlohmann::json summary_json(const RunOutcome& outcome, const RunConfig& config) {
    nlohmann::json j;
    j["status"] = to_string(outcome.status);
    j["t_final"] = outcome.t_final;
    j["mass_max"] = outcome.mass_max;
    j["sup_linf_u"] = outcome.sup_linf_u;
    j["accepted_steps"] = outcome.final_state.step_count;
    j["rejected_steps"] = outcome.rejected_steps;
    j["regime_verdict"] = verdict_json(classify_regime(config.params, config.production));
    j["config_echo"] = serialize_config(config);
    return j;
}

RunInputs build_run_inputs(const RunConfig& config, const std::filesystem::path& base_dir) {
    RunInputs in;
    in.grid = config.domain.grid();
    in.u0 = make_initial_field(config.initial_u, in.grid, base_dir);
    if (config.params.tau == 1) {
        if (!config.initial_v || !config.initial_w) {
            throw ConfigError("tau = 1 requires [initial.v] and [initial.w] (signal initial data)");
        }
        in.v0 = make_initial_field(*config.initial_v, in.grid, base_dir);
        in.w0 = make_initial_field(*config.initial_w, in.grid, base_dir);
    }
    return in;
}

unsigned sweep_thread_count() {
    if (const char* env = std::getenv("CHTX_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, bool classify_only,
                                unsigned threads, const std::filesystem::path& base_dir) {
    std::size_t cells = 1;
    for (const auto& axis : axes) cells *= axis.values.size();
    std::vector<SweepRow> rows(cells);

    auto evaluate = [&](std::size_t cell) {
        SweepRow& row = rows[cell];
        RunConfig cfg = base;
        // Mixed-radix decode with the first axis slowest.
        std::size_t rest = cell;
        row.values.assign(axes.size(), 0.0);
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& vals = axes[a].values;
            row.values[a] = vals[rest % vals.size()];
            rest /= vals.size();
        }
        try {
            for (std::size_t a = 0; a < axes.size(); ++a) apply_parameter(cfg, axes[a].name, row.values[a]);
            validate_config(cfg);
        } catch (const std::exception& e) {
            // Outside the modelling assumptions no boundedness result applies.
            row.theorem = row.case_label = row.comparison = "None";
            row.status = "Invalid";
            row.error = e.what();
            return;
        }
        try {
            const RegimeVerdict v = classify_regime(cfg.params, cfg.production);
            row.theorem = to_string(v.theorem);
            row.case_label = to_string(v.case_label);
            row.comparison = to_string(v.comparison);
            if (classify_only) return;
            const RunInputs in = build_run_inputs(cfg, base_dir);
            const RunOutcome out = run(cfg.params, cfg.production, in.grid, in.u0, in.v0, in.w0, cfg.solver);
            row.ran = true;
            row.status = to_string(out.status);
            row.mass_max = out.mass_max;
            row.sup_linf_u = out.sup_linf_u;
            row.t_final = out.t_final;
        } catch (const std::exception& e) {
            row.status = "Error";
            row.error = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t cell = next++; cell < cells; cell = next++) evaluate(cell);
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepAxis>& axes, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    for (const auto& axis : axes) out << axis.name << ',';
    out << "theorem,case,comparison,status,mass_max,sup_linf_u,t_final,error\n";
    for (const auto& r : rows) {
        for (double v : r.values) out << format_number(v) << ',';
        out << r.theorem << ',' << r.case_label << ',' << r.comparison << ',' << r.status << ',';
        if (r.ran) {
            out << format_number(r.mass_max) << ',' << format_number(r.sup_linf_u) << ',' << format_number(r.t_final);
        } else {
            out << ",,";
        }
        out << ',' << csv_escape(r.error) << '\n';
    }
    return out.str();
}

int cmd_check_regime(const RunConfig& config, std::ostream& out) {
    const RegimeVerdict v = classify_regime(config.params, config.production);
    out << format_verdict(v);
    return v.theorem == Theorem::None ? exit_code::no_regime : exit_code::ok;
}

int cmd_run(const RunConfig& config, std::ostream& out, const std::filesystem::path& base_dir) {
    const std::filesystem::path dir(config.output.dir);
    std::filesystem::create_directories(dir);
    const RunInputs in = build_run_inputs(config, base_dir);

    StepObserver observer;
    if (config.output.snapshot_every > 0) {
        observer = [&](const SimulationState& st, const DiagnosticsRecord&) {
            if (st.step_count % config.output.snapshot_every != 0) return;
            const std::string stem = config.output.snapshot_prefix + "_";
            const std::string step = padded_step(st.step_count);
            write_snapshot(dir / (stem + "u_" + step + ".chtx"), st.u);
            write_snapshot(dir / (stem + "v_" + step + ".chtx"), st.v);
            write_snapshot(dir / (stem + "w_" + step + ".chtx"), st.w);
        };
    }

    const RunOutcome outcome =
        run(config.params, config.production, in.grid, in.u0, in.v0, in.w0, config.solver, observer);
    write_text(dir / config.output.diagnostics_csv, diagnostics_csv(outcome.diagnostics));
    write_text(dir / config.output.summary_json, summary_json(outcome, config).dump(2) + "\n");

    out << "status: " << to_string(outcome.status) << "\n"
        << "t_final: " << format_number(outcome.t_final) << "\n"
        << "mass_max: " << format_number(outcome.mass_max) << "\n"
        << "sup_linf_u: " << format_number(outcome.sup_linf_u) << "\n";
    return exit_code_for(outcome.status);
}

int cmd_sweep(const RunConfig& config, const std::vector<SweepAxis>& extra_axes, bool classify_only,
              std::ostream& out, const std::filesystem::path& base_dir) {
    std::vector<SweepAxis> axes = config.sweep.axes;
    for (const auto& extra : extra_axes) {
        const auto& names = sweepable_parameters();
        if (std::find(names.begin(), names.end(), extra.name) == names.end()) {
            throw ConfigError("unknown sweep parameter '" + extra.name + "'");
        }
        if (extra.values.empty()) throw ConfigError("sweep axis '" + extra.name + "' has no values");
        auto it = std::find_if(axes.begin(), axes.end(), [&](const SweepAxis& a) { return a.name == extra.name; });
        if (it != axes.end()) {
            *it = extra;
        } else {
            axes.push_back(extra);
        }
    }
    if (axes.size() > 2) throw ConfigError("a sweep takes at most two axes");
    const bool only = classify_only || config.sweep.classify_only;
    const auto rows = run_sweep(config, axes, only, sweep_thread_count(), base_dir);

    const std::filesystem::path dir(config.output.dir);
    std::filesystem::create_directories(dir);
    const std::string csv = sweep_csv(axes, rows);
    write_text(dir / config.output.sweep_csv, csv);
    out << csv;
    return exit_code::ok;
}

int cmd_audit(const RunConfig& config, std::ostream& out) {
    const AuditSpec audit = config.audit.value_or(AuditSpec{});

    out << "theta table, L^rho interpolation: theta = k(1-1/rho)/(k-1+2/n), exponent = (k+rho)*theta/k\n";
    out << "k,rho,n,theta,exponent,in_unit_interval,k_floor\n";
    for (double rho : audit.rho) {
        for (int n : audit.n) {
            for (double k : audit.k) {
                const ThetaL21 th = gn_theta_lemma21(k, rho, n);
                out << format_number(k) << ',' << format_number(rho) << ',' << n << ',' << format_number(th.theta)
                    << ',' << format_number(th.exponent) << ',' << (th.in_unit_interval ? "yes" : "no") << ','
                    << format_number(gn_k_floor(rho, n)) << '\n';
            }
        }
    }

    out << "\ntheta table, L^k interpolation: theta = (k/2-1/2)/(k/2-1/2+1/n)\n";
    out << "k,n,theta\n";
    for (int n : audit.n) {
        for (double k : audit.k) out << format_number(k) << ',' << n << ',' << format_number(gn_theta_lemma23(k, n)) << '\n';
    }

    out << "\nimplied constants over " << audit.samples << " seeded random fields (seed " << audit.seed
        << ", counts " << audit.counts << " per axis)\n";
    out << "k,rho,n,samples,min,max,mean\n";
    for (double rho : audit.rho) {
        for (int n : audit.n) {
            if (n > 2) {
                out << "# n = " << n << ": no field sampling beyond two dimensions\n";
                continue;
            }
            const Grid grid = n == 1 ? Grid::interval(1.0, audit.counts)
                                     : Grid::rectangle(1.0, 1.0, audit.counts, audit.counts);
            for (double k : audit.k) {
                double lo = INFINITY;
                double hi = 0.0;
                double sum = 0.0;
                for (int i = 0; i < audit.samples; ++i) {
                    const Field phi = perturbed_constant(grid, 1.0, 0.95, audit.seed + static_cast<std::uint64_t>(i), 8);
                    const double c = audit_gn_on_field(phi, k, rho, n).implied_constant;
                    lo = std::min(lo, c);
                    hi = std::max(hi, c);
                    sum += c;
                }
                out << format_number(k) << ',' << format_number(rho) << ',' << n << ',' << audit.samples << ',';
                if (audit.samples > 0) {
                    out << format_number(lo) << ',' << format_number(hi) << ',' << format_number(sum / audit.samples);
                } else {
                    out << ",,";
                }
                out << '\n';
            }
        }
    }
    return exit_code::ok;
}

}  // namespace chtx
