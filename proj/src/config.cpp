#include "chtx/config.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "chtx/number_format.hpp"

namespace chtx {

namespace {

const std::vector<std::string> kSections{"domain",    "params",    "production", "initial.u", "initial.v",
                                         "initial.w", "solver",    "output",     "sweep",     "audit"};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    return out;
}

struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
};

// Hands out the keys of one section and reports whatever is left unread.
class SectionReader {
public:
    explicit SectionReader(const Section* section) : section_(section) {
        if (section_) used_.assign(section_->entries.size(), false);
    }

    bool present() const { return section_ != nullptr; }

    std::optional<std::string> take(const std::string& key) {
        if (!section_) return std::nullopt;
        for (std::size_t i = 0; i < section_->entries.size(); ++i) {
            if (section_->entries[i].first == key) {
                used_[i] = true;
                return section_->entries[i].second;
            }
        }
        return std::nullopt;
    }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) throw ConfigError("[" + section_->name + "] missing required key '" + key + "'");
        return *v;
    }

    double number(const std::string& key, double fallback) {
        auto v = take(key);
        return v ? to_number(key, *v) : fallback;
    }

    double required_number(const std::string& key) { return to_number(key, require(key)); }

    long integer(const std::string& key, long fallback) {
        auto v = take(key);
        return v ? to_integer(key, *v) : fallback;
    }

    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
        auto v = take(key);
        if (!v) return fallback;
        std::uint64_t out = 0;
        const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
        if (res.ec != std::errc() || res.ptr != v->data() + v->size()) bad(key, *v);
        return out;
    }

    bool boolean(const std::string& key, bool fallback) {
        auto v = take(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        bad(key, *v);
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
        auto v = take(key);
        if (!v) return fallback;
        std::vector<double> out;
        for (const auto& item : split_list(*v)) out.push_back(to_number(key, item));
        return out;
    }

    std::vector<std::pair<std::string, std::string>> remaining() const {
        std::vector<std::pair<std::string, std::string>> out;
        if (!section_) return out;
        for (std::size_t i = 0; i < section_->entries.size(); ++i) {
            if (!used_[i]) out.push_back(section_->entries[i]);
        }
        return out;
    }

    void finish() const {
        const auto left = remaining();
        if (!left.empty()) throw ConfigError("[" + section_->name + "] unknown key '" + left.front().first + "'");
    }

    [[noreturn]] void bad(const std::string& key, const std::string& value) const {
        throw ConfigError("[" + section_->name + "] invalid value for '" + key + "': '" + value + "'");
    }

    double to_number(const std::string& key, const std::string& value) const {
        try {
            return parse_number(value);
        } catch (const std::invalid_argument&) {
            bad(key, value);
        }
    }

    long to_integer(const std::string& key, const std::string& value) const {
        long out = 0;
        const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
        if (res.ec != std::errc() || res.ptr != value.data() + value.size()) bad(key, value);
        return out;
    }

private:
    const Section* section_;
    std::vector<bool> used_;
};

std::map<std::string, Section> split_sections(std::string_view text) {
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            const std::string name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), name) == kSections.end()) {
                throw ConfigError(where + "unknown section [" + name + "]");
            }
            if (sections.count(name)) throw ConfigError(where + "duplicate section [" + name + "]");
            current = &sections[name];
            current->name = name;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        if (!current) throw ConfigError(where + "key outside of any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ConfigError(where + "empty key");
        for (const auto& [k, v] : current->entries) {
            if (k == key) throw ConfigError(where + "duplicate key '" + key + "'");
        }
        current->entries.emplace_back(key, value);
    }
    return sections;
}

const Section* find(const std::map<std::string, Section>& sections, const std::string& name) {
    const auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
}

const Section& require_section(const std::map<std::string, Section>& sections, const std::string& name) {
    const Section* s = find(sections, name);
    if (!s) throw ConfigError("missing required section [" + name + "]");
    return *s;
}

std::size_t to_count(double v, const std::string& what) {
    if (!(v >= 0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw ConfigError(what + " must be a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

DomainSpec read_domain(SectionReader r) {
    DomainSpec d;
    d.dim = static_cast<int>(r.integer("dim", 1));
    if (d.dim != 1 && d.dim != 2) throw ConfigError("[domain] dim must be 1 or 2");
    const auto lengths = r.numbers("lengths", {});
    const auto counts = r.numbers("counts", {});
    if (lengths.size() != static_cast<std::size_t>(d.dim) || counts.size() != static_cast<std::size_t>(d.dim)) {
        throw ConfigError("[domain] lengths and counts need one entry per axis");
    }
    for (int a = 0; a < d.dim; ++a) {
        d.lengths[a] = lengths[a];
        d.counts[a] = to_count(counts[a], "[domain] counts");
    }
    r.finish();
    return d;
}

ModelParams read_params(SectionReader r, int dim) {
    ModelParams p;
    p.n = static_cast<int>(r.integer("n", dim));
    p.tau = static_cast<int>(r.integer("tau", 0));
    p.chi = r.required_number("chi");
    p.xi = r.required_number("xi");
    p.a = r.required_number("a");
    p.b = r.required_number("b");
    p.alpha = r.required_number("alpha");
    p.beta = r.required_number("beta");
    r.finish();
    return p;
}

ProductionSpec read_production(SectionReader r) {
    ProductionSpec s;
    const std::string kind = r.take("kind").value_or("power");
    if (kind == "power") {
        s.kind = ProductionKind::PowerPrototype;
    } else if (kind == "tabulated") {
        s.kind = ProductionKind::CustomTabulated;
        s.s_values = r.numbers("s_values", {});
        s.f_values = r.numbers("f_values", {});
        s.g_values = r.numbers("g_values", {});
    } else {
        throw ConfigError("[production] kind must be 'power' or 'tabulated'");
    }
    s.ell = r.required_number("ell");
    s.rho = r.required_number("rho");
    s.k1 = r.required_number("k1");
    s.k2 = r.required_number("k2");
    r.finish();
    return s;
}

InitialData read_initial(SectionReader r) {
    InitialData d;
    const std::string kind = r.require("kind");
    if (kind == "constant") {
        d.kind = InitialKind::Constant;
        d.value = r.required_number("value");
    } else if (kind == "gaussian") {
        d.kind = InitialKind::GaussianBump;
        d.center = r.numbers("center", {});
        d.width = r.required_number("width");
        d.amplitude = r.required_number("amplitude");
        d.baseline = r.number("baseline", 0.0);
    } else if (kind == "perturbed") {
        d.kind = InitialKind::PerturbedConstant;
        d.baseline = r.required_number("baseline");
        d.amplitude = r.required_number("amplitude");
        d.seed = r.unsigned_integer("seed", 0);
    } else if (kind == "snapshot") {
        d.kind = InitialKind::FromSnapshot;
        d.path = r.require("path");
    } else {
        throw ConfigError("initial data kind must be constant, gaussian, perturbed or snapshot");
    }
    r.finish();
    return d;
}

SolverConfig read_solver(SectionReader r) {
    SolverConfig c;
    c.dt = r.number("dt", c.dt);
    c.t_end = r.number("t_end", c.t_end);
    c.blowup_threshold = r.number("blowup_threshold", c.blowup_threshold);
    c.dt_min = r.number("dt_min", c.dt_min);
    c.linear_tol = r.number("linear_tol", c.linear_tol);
    c.max_linear_iters = static_cast<int>(r.integer("max_linear_iters", c.max_linear_iters));
    c.upwind = r.boolean("upwind", c.upwind);
    c.diag_k_set = r.numbers("diag_k", {});
    r.finish();
    return c;
}

OutputSpec read_output(SectionReader r) {
    OutputSpec o;
    o.dir = r.take("dir").value_or(o.dir);
    o.diagnostics_csv = r.take("diagnostics_csv").value_or(o.diagnostics_csv);
    o.summary_json = r.take("summary_json").value_or(o.summary_json);
    o.snapshot_every = r.integer("snapshot_every", o.snapshot_every);
    o.snapshot_prefix = r.take("snapshot_prefix").value_or(o.snapshot_prefix);
    o.sweep_csv = r.take("sweep_csv").value_or(o.sweep_csv);
    r.finish();
    if (o.snapshot_every < 0) throw ConfigError("[output] snapshot_every must be nonnegative");
    return o;
}

SweepSpec read_sweep(SectionReader r) {
    SweepSpec s;
    s.classify_only = r.boolean("classify_only", false);
    for (const auto& [key, value] : r.remaining()) {
        const auto& names = sweepable_parameters();
        if (std::find(names.begin(), names.end(), key) == names.end()) {
            throw ConfigError("[sweep] unknown key '" + key + "' (not a sweepable parameter)");
        }
        SweepAxis axis{key, r.numbers(key, {})};
        if (axis.values.empty()) throw ConfigError("[sweep] axis '" + key + "' has no values");
        s.axes.push_back(std::move(axis));
    }
    return s;
}

AuditSpec read_audit(SectionReader r) {
    AuditSpec a;
    a.k = r.numbers("k", a.k);
    a.rho = r.numbers("rho", a.rho);
    const auto ns = r.numbers("n", {});
    if (!ns.empty()) {
        a.n.clear();
        for (double v : ns) a.n.push_back(static_cast<int>(to_count(v, "[audit] n")));
    }
    a.samples = static_cast<int>(r.integer("samples", a.samples));
    a.seed = r.unsigned_integer("seed", a.seed);
    a.counts = static_cast<std::size_t>(r.integer("counts", static_cast<long>(a.counts)));
    r.finish();
    return a;
}

void validate_initial(const InitialData& d, int dim, const std::string& which) {
    const std::string ctx = "[initial." + which + "] ";
    const std::string why = " (nonnegative initial data assumption)";
    switch (d.kind) {
        case InitialKind::Constant:
            if (!(d.value >= 0) || !std::isfinite(d.value)) throw ConfigError(ctx + "value must be >= 0" + why);
            break;
        case InitialKind::GaussianBump:
            if (d.center.size() != static_cast<std::size_t>(dim)) {
                throw ConfigError(ctx + "center needs one coordinate per axis");
            }
            if (!(d.width > 0)) throw ConfigError(ctx + "width must be positive");
            if (!(d.amplitude >= 0) || !(d.baseline >= 0)) {
                throw ConfigError(ctx + "amplitude and baseline must be >= 0" + why);
            }
            break;
        case InitialKind::PerturbedConstant:
            if (!(d.baseline >= 0) || !(d.amplitude >= 0) || d.amplitude > d.baseline) {
                throw ConfigError(ctx + "need 0 <= amplitude <= baseline" + why);
            }
            break;
        case InitialKind::FromSnapshot:
            if (d.path.empty()) throw ConfigError(ctx + "path must not be empty");
            break;
    }
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += format_number(values[i]);
    }
    return out;
}

void write_initial(std::ostringstream& out, const std::string& which, const InitialData& d) {
    out << "\n[initial." << which << "]\n";
    switch (d.kind) {
        case InitialKind::Constant:
            out << "kind = constant\nvalue = " << format_number(d.value) << "\n";
            break;
        case InitialKind::GaussianBump:
            out << "kind = gaussian\ncenter = " << join(d.center) << "\nwidth = " << format_number(d.width)
                << "\namplitude = " << format_number(d.amplitude) << "\nbaseline = " << format_number(d.baseline)
                << "\n";
            break;
        case InitialKind::PerturbedConstant:
            out << "kind = perturbed\nbaseline = " << format_number(d.baseline)
                << "\namplitude = " << format_number(d.amplitude) << "\nseed = " << d.seed << "\n";
            break;
        case InitialKind::FromSnapshot:
            out << "kind = snapshot\npath = " << d.path << "\n";
            break;
    }
}

}  // namespace

const std::vector<std::string>& sweepable_parameters() {
    static const std::vector<std::string> names{"tau", "n",   "chi", "xi", "a",  "b",      "alpha",
                                                "beta", "ell", "rho", "k1", "k2", "dt",     "t_end",
                                                "blowup_threshold",  "counts"};
    return names;
}

void apply_parameter(RunConfig& c, const std::string& name, double value) {
    auto as_int = [&](const char* what) {
        if (value != static_cast<double>(static_cast<long>(value))) {
            throw ConfigError(std::string(what) + " must be an integer");
        }
        return static_cast<int>(value);
    };
    if (name == "tau") c.params.tau = as_int("tau");
    else if (name == "n") c.params.n = as_int("n");
    else if (name == "chi") c.params.chi = value;
    else if (name == "xi") c.params.xi = value;
    else if (name == "a") c.params.a = value;
    else if (name == "b") c.params.b = value;
    else if (name == "alpha") c.params.alpha = value;
    else if (name == "beta") c.params.beta = value;
    else if (name == "ell") c.production.ell = value;
    else if (name == "rho") c.production.rho = value;
    else if (name == "k1") c.production.k1 = value;
    else if (name == "k2") c.production.k2 = value;
    else if (name == "dt") c.solver.dt = value;
    else if (name == "t_end") c.solver.t_end = value;
    else if (name == "blowup_threshold") c.solver.blowup_threshold = value;
    else if (name == "counts") {
        const auto n = static_cast<std::size_t>(as_int("counts"));
        c.domain.counts[0] = n;
        if (c.domain.dim == 2) c.domain.counts[1] = n;
    } else {
        throw ConfigError("unknown sweep parameter '" + name + "'");
    }
}

void validate_config(const RunConfig& c) {
    try {
        (void)c.domain.grid();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("[domain] ") + e.what());
    }
    try {
        c.params.validate();
        c.production.validate();
        c.solver.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    validate_initial(c.initial_u, c.domain.dim, "u");
    if (c.params.tau == 1) {
        if (!c.initial_v || !c.initial_w) {
            throw ConfigError("tau = 1 requires [initial.v] and [initial.w] (signal initial data)");
        }
    }
    if (c.initial_v) validate_initial(*c.initial_v, c.domain.dim, "v");
    if (c.initial_w) validate_initial(*c.initial_w, c.domain.dim, "w");
    if (c.audit) {
        if (c.audit->samples < 0) throw ConfigError("[audit] samples must be nonnegative");
        if (c.audit->counts < 8) throw ConfigError("[audit] counts must be at least 8");
        for (double k : c.audit->k) {
            if (!(k > 1)) throw ConfigError("[audit] k must exceed 1");
        }
        for (double r : c.audit->rho) {
            if (!(r > 1)) throw ConfigError("[audit] rho must exceed 1 (repellent production growth assumption)");
        }
        for (int n : c.audit->n) {
            if (n < 1) throw ConfigError("[audit] n must be at least 1");
        }
    }
}

RunConfig parse_config(std::string_view text) {
    const auto sections = split_sections(text);
    RunConfig c;
    c.domain = read_domain(SectionReader(&require_section(sections, "domain")));
    c.params = read_params(SectionReader(&require_section(sections, "params")), c.domain.dim);
    c.production = read_production(SectionReader(&require_section(sections, "production")));
    c.initial_u = read_initial(SectionReader(&require_section(sections, "initial.u")));
    if (const Section* s = find(sections, "initial.v")) c.initial_v = read_initial(SectionReader(s));
    if (const Section* s = find(sections, "initial.w")) c.initial_w = read_initial(SectionReader(s));
    c.solver = read_solver(SectionReader(find(sections, "solver")));
    c.output = read_output(SectionReader(find(sections, "output")));
    c.sweep = read_sweep(SectionReader(find(sections, "sweep")));
    if (const Section* s = find(sections, "audit")) c.audit = read_audit(SectionReader(s));
    validate_config(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    const int dim = c.domain.dim;
    std::vector<double> lengths(c.domain.lengths.begin(), c.domain.lengths.begin() + dim);
    std::vector<double> counts;
    for (int a = 0; a < dim; ++a) counts.push_back(static_cast<double>(c.domain.counts[a]));
    out << "[domain]\ndim = " << dim << "\nlengths = " << join(lengths) << "\ncounts = " << join(counts) << "\n";

    const auto& p = c.params;
    out << "\n[params]\nn = " << p.n << "\ntau = " << p.tau << "\nchi = " << format_number(p.chi)
        << "\nxi = " << format_number(p.xi) << "\na = " << format_number(p.a) << "\nb = " << format_number(p.b)
        << "\nalpha = " << format_number(p.alpha) << "\nbeta = " << format_number(p.beta) << "\n";

    const auto& s = c.production;
    out << "\n[production]\nkind = " << (s.kind == ProductionKind::PowerPrototype ? "power" : "tabulated") << "\n";
    out << "ell = " << format_number(s.ell) << "\nrho = " << format_number(s.rho) << "\nk1 = " << format_number(s.k1)
        << "\nk2 = " << format_number(s.k2) << "\n";
    if (s.kind == ProductionKind::CustomTabulated) {
        out << "s_values = " << join(s.s_values) << "\nf_values = " << join(s.f_values)
            << "\ng_values = " << join(s.g_values) << "\n";
    }

    write_initial(out, "u", c.initial_u);
    if (c.initial_v) write_initial(out, "v", *c.initial_v);
    if (c.initial_w) write_initial(out, "w", *c.initial_w);

    const auto& sv = c.solver;
    out << "\n[solver]\ndt = " << format_number(sv.dt) << "\nt_end = " << format_number(sv.t_end)
        << "\nblowup_threshold = " << format_number(sv.blowup_threshold) << "\ndt_min = " << format_number(sv.dt_min)
        << "\nlinear_tol = " << format_number(sv.linear_tol) << "\nmax_linear_iters = " << sv.max_linear_iters
        << "\nupwind = " << (sv.upwind ? "true" : "false") << "\n";
    if (!sv.diag_k_set.empty()) out << "diag_k = " << join(sv.diag_k_set) << "\n";

    const auto& o = c.output;
    out << "\n[output]\ndir = " << o.dir << "\ndiagnostics_csv = " << o.diagnostics_csv
        << "\nsummary_json = " << o.summary_json << "\nsnapshot_every = " << o.snapshot_every
        << "\nsnapshot_prefix = " << o.snapshot_prefix << "\nsweep_csv = " << o.sweep_csv << "\n";

    out << "\n[sweep]\nclassify_only = " << (c.sweep.classify_only ? "true" : "false") << "\n";
    for (const auto& axis : c.sweep.axes) out << axis.name << " = " << join(axis.values) << "\n";

    if (c.audit) {
        const auto& a = *c.audit;
        std::vector<double> ns(a.n.begin(), a.n.end());
        out << "\n[audit]\nk = " << join(a.k) << "\nrho = " << join(a.rho) << "\nn = " << join(ns)
            << "\nsamples = " << a.samples << "\nseed = " << a.seed << "\ncounts = " << a.counts << "\n";
    }
    return out.str();
}

}  // namespace chtx
