#include "chtx/model.hpp"

#include <algorithm>
#include <cmath>

namespace chtx {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

bool finite(double x) { return std::isfinite(x); }

double tabulated_eval(const std::vector<double>& s_values, const std::vector<double>& values,
                      double exponent, double s) {
    const double s_last = s_values.back();
    if (s >= s_last) {
        if (s == s_last) return values.back();
        return values.back() * std::pow(s / s_last, exponent);
    }
    // First sample strictly greater than s; s_values[0] = 0 ≤ s guarantees hi ≥ 1.
    const auto it = std::upper_bound(s_values.begin(), s_values.end(), s);
    const auto hi = static_cast<std::size_t>(it - s_values.begin());
    const std::size_t lo = hi - 1;
    const double t = (s - s_values[lo]) / (s_values[hi] - s_values[lo]);
    return values[lo] + t * (values[hi] - values[lo]);
}

void require_nonnegative_argument(double s, const char* fn) {
    if (!(s >= 0.0)) throw DomainError(std::string(fn) + ": argument must be nonnegative");
}

Margin make_margin(std::string group, std::string name, double lhs, Relation rel, double rhs) {
    Margin m;
    m.group = std::move(group);
    m.name = std::move(name);
    m.lhs = lhs;
    m.rhs = rhs;
    m.relation = rel;
    switch (rel) {
        case Relation::Greater:
            m.slack = lhs - rhs;
            m.satisfied = lhs > rhs;
            break;
        case Relation::GreaterEqual:
            m.slack = lhs - rhs;
            m.satisfied = lhs >= rhs;
            break;
        case Relation::Less:
            m.slack = rhs - lhs;
            m.satisfied = lhs < rhs;
            break;
        case Relation::LessEqual:
            m.slack = rhs - lhs;
            m.satisfied = lhs <= rhs;
            break;
    }
    return m;
}

bool all_satisfied(const std::vector<Margin>& margins, const std::string& group) {
    bool any = false;
    for (const auto& m : margins) {
        if (m.group != group) continue;
        any = true;
        if (!m.satisfied) return false;
    }
    return any;
}

}  // namespace

void ModelParams::validate() const {
    require(n >= 1, "n must be at least 1 (spatial dimension assumption)");
    require(tau == 0 || tau == 1, "tau must be 0 or 1 (regime flag)");
    require(finite(chi) && chi > 0, "chi must be positive (coefficient positivity assumption)");
    require(finite(xi) && xi > 0, "xi must be positive (coefficient positivity assumption)");
    require(finite(a) && a > 0, "a must be positive (coefficient positivity assumption)");
    require(finite(b) && b > 0, "b must be positive (coefficient positivity assumption)");
    require(finite(alpha) && alpha >= 1, "alpha must be at least 1 (exponent assumption)");
    require(finite(beta) && beta >= 1, "beta must be at least 1 (exponent assumption)");
}

void ModelParams::validate_for_simulation() const {
    require(n >= 1, "n must be at least 1");
    require(tau == 0 || tau == 1, "tau must be 0 or 1");
    require(finite(chi) && chi >= 0, "chi must be nonnegative");
    require(finite(xi) && xi >= 0, "xi must be nonnegative");
    require(finite(a) && a >= 0, "a must be nonnegative");
    require(finite(b) && b >= 0, "b must be nonnegative");
    require(finite(alpha) && alpha >= 1, "alpha must be at least 1");
    require(finite(beta) && beta >= 1, "beta must be at least 1");
}

void ProductionSpec::validate() const {
    require(finite(ell) && ell > 0, "ell must be positive (attractant production growth assumption)");
    require(finite(rho) && rho > 1, "rho must exceed 1 (repellent production growth assumption)");
    require(finite(k1) && k1 > 0, "k1 must be positive (attractant production growth assumption)");
    require(finite(k2) && k2 > 0, "k2 must be positive (repellent production growth assumption)");
    if (kind != ProductionKind::CustomTabulated) return;

    require(s_values.size() >= 2, "tabulated production needs at least two samples");
    require(f_values.size() == s_values.size() && g_values.size() == s_values.size(),
            "tabulated production: s_values, f_values and g_values must have equal length");
    require(s_values.front() == 0.0, "tabulated production: s_values must start at 0");
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        require(finite(s_values[i]) && finite(f_values[i]) && finite(g_values[i]),
                "tabulated production: samples must be finite");
        if (i > 0) {
            require(s_values[i] > s_values[i - 1], "tabulated production: s_values must increase strictly");
        }
    }
    const EnvelopeReport report = validate_envelope(*this, s_values);
    for (const auto& sample : report.samples) {
        require(sample.f_ok, "tabulated f violates 0 <= f(s) <= k1*s^ell at s = " + std::to_string(sample.s) +
                                 " (attractant production growth assumption)");
        require(sample.g_ok, "tabulated g violates k2*s^rho <= g(s) <= k2*s*(s+1)^(rho-1) at s = " +
                                 std::to_string(sample.s) + " (repellent production growth assumption)");
    }
}

double eval_f(const ProductionSpec& spec, double s) {
    require_nonnegative_argument(s, "eval_f");
    if (spec.kind == ProductionKind::PowerPrototype) return spec.k1 * std::pow(s, spec.ell);
    return tabulated_eval(spec.s_values, spec.f_values, spec.ell, s);
}

double eval_g(const ProductionSpec& spec, double s) {
    require_nonnegative_argument(s, "eval_g");
    if (spec.kind == ProductionKind::PowerPrototype) return spec.k2 * std::pow(s, spec.rho);
    return tabulated_eval(spec.s_values, spec.g_values, spec.rho, s);
}

double f_upper_envelope(const ProductionSpec& spec, double s) { return spec.k1 * std::pow(s, spec.ell); }

double g_lower_envelope(const ProductionSpec& spec, double s) { return spec.k2 * std::pow(s, spec.rho); }

double g_upper_envelope(const ProductionSpec& spec, double s) {
    return spec.k2 * s * std::pow(s + 1.0, spec.rho - 1.0);
}

bool EnvelopeReport::all_pass() const {
    return std::all_of(samples.begin(), samples.end(), [](const EnvelopeSample& e) { return e.f_ok && e.g_ok; });
}

EnvelopeReport validate_envelope(const ProductionSpec& spec, const std::vector<double>& samples) {
    EnvelopeReport report;
    report.samples.reserve(samples.size());
    for (double s : samples) {
        EnvelopeSample e;
        e.s = s;
        e.f = eval_f(spec, s);
        e.g = eval_g(spec, s);
        e.f_ok = e.f >= 0.0 && e.f <= f_upper_envelope(spec, s);
        e.g_ok = e.g >= g_lower_envelope(spec, s) && e.g <= g_upper_envelope(spec, s);
        report.samples.push_back(e);
    }
    return report;
}

RegimeVerdict classify_regime(const ModelParams& params, const ProductionSpec& spec) {
    require(params.n >= 1, "n must be at least 1 (spatial dimension assumption)");
    require(params.tau == 0 || params.tau == 1, "tau must be 0 or 1 (regime flag)");
    require(finite(params.alpha) && finite(params.beta) && finite(spec.ell) && finite(spec.rho),
            "classifier exponents must be finite");
    const double n = params.n;
    const double alpha = params.alpha;
    const double beta = params.beta;
    const double ell = spec.ell;
    const double rho = spec.rho;
    const double am1 = alpha - 1.0;

    RegimeVerdict verdict;
    auto& m = verdict.margins;
    std::string group_a;
    std::string group_b;
    if (params.tau == 0) {
        group_a = "PE-A";
        group_b = "PE-B";
        m.push_back(make_margin(group_a, "beta > n(alpha-1)/2", beta, Relation::Greater, 0.5 * n * am1));
        m.push_back(make_margin(group_a, "ell <= min(alpha-1, rho)", ell, Relation::LessEqual, std::min(am1, rho)));
        m.push_back(make_margin(group_b, "beta > (n*ell + 2(ell-alpha+1))/2", beta, Relation::Greater,
                                0.5 * (n * ell + 2.0 * (ell - alpha + 1.0))));
        m.push_back(make_margin(group_b, "alpha-1 < min(ell, rho)", am1, Relation::Less, std::min(ell, rho)));
    } else {
        group_a = "PP-A";
        group_b = "PP-B";
        const double mx = std::max(rho, ell);
        m.push_back(make_margin(group_a, "beta > n(alpha-1)/2", beta, Relation::Greater, 0.5 * n * am1));
        m.push_back(make_margin(group_a, "alpha-1 >= max(rho, ell)", am1, Relation::GreaterEqual, mx));
        m.push_back(make_margin(group_b, "beta > (n*max(rho,ell) + 2(max(rho,ell)-alpha+1))/2", beta,
                                Relation::Greater, 0.5 * (n * mx + 2.0 * (mx - alpha + 1.0))));
        m.push_back(make_margin(group_b, "alpha-1 < min(rho, ell)", am1, Relation::Less, std::min(rho, ell)));
    }

    const bool case_a = all_satisfied(m, group_a);
    const bool case_b = all_satisfied(m, group_b);
    verdict.both_cases = case_a && case_b;
    auto note = [&](auto&& check) {
        try {
            check();
        } catch (const ParameterError& e) {
            verdict.assumption_violations.emplace_back(e.what());
        }
    };
    note([&] { params.validate(); });
    note([&] { spec.validate(); });
    const bool admissible = verdict.assumption_violations.empty();
    if (admissible && (case_a || case_b)) {
        verdict.theorem = params.tau == 0 ? Theorem::PE : Theorem::PP;
        verdict.case_label = case_a ? CaseLabel::A : CaseLabel::B;
    }

    auto& c = verdict.comparison_margins;
    c.push_back(make_margin("subquadratic", "alpha >= 1", alpha, Relation::GreaterEqual, 1.0));
    c.push_back(make_margin("subquadratic", "alpha < 2", alpha, Relation::Less, 2.0));
    c.push_back(make_margin("subquadratic", "beta > n/2 + 2 - alpha", beta, Relation::Greater, 0.5 * n + 2.0 - alpha));
    c.push_back(make_margin("superquadratic", "alpha >= 2", alpha, Relation::GreaterEqual, 2.0));
    c.push_back(make_margin("superquadratic", "alpha < 1 + 2*beta/n", alpha, Relation::Less, 1.0 + 2.0 * beta / n));
    c.push_back(make_margin("superquadratic", "beta > n/2", beta, Relation::Greater, 0.5 * n));
    if (!admissible) return verdict;
    if (all_satisfied(c, "subquadratic")) {
        verdict.comparison = ComparisonRegime::Subquadratic;
    } else if (all_satisfied(c, "superquadratic")) {
        verdict.comparison = ComparisonRegime::Superquadratic;
    }
    return verdict;
}

std::string to_string(Theorem t) {
    switch (t) {
        case Theorem::PE: return "PE";
        case Theorem::PP: return "PP";
        case Theorem::None: break;
    }
    return "None";
}

std::string to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::A: return "A";
        case CaseLabel::B: return "B";
        case CaseLabel::None: break;
    }
    return "None";
}

std::string to_string(ComparisonRegime r) {
    switch (r) {
        case ComparisonRegime::Subquadratic: return "Subquadratic";
        case ComparisonRegime::Superquadratic: return "Superquadratic";
        case ComparisonRegime::None: break;
    }
    return "None";
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Greater: return ">";
        case Relation::GreaterEqual: return ">=";
        case Relation::Less: return "<";
        case Relation::LessEqual: return "<=";
    }
    return "?";
}

}  // namespace chtx
