#ifndef CHTX_MODEL_HPP
#define CHTX_MODEL_HPP

/**
 * @file model.hpp
 * @brief Coefficients of the attraction-repulsion chemotaxis system, the
 * signal production laws f and g, and the boundedness-regime classifier.
 *
 * The system evolved by the solver is
 *
 *   u_t      = Δu − χ∇·(u∇v) + ξ∇·(u∇w) + a u^α − b u^α ∫ u^β
 *   τ v_t    = Δv − v + f(u)
 *   τ w_t    = Δw − w + g(u)
 *
 * with homogeneous Neumann conditions on all three unknowns.
 */

#include <stdexcept>
#include <string>
#include <vector>

namespace chtx {

/// Thrown when a parameter set violates a modelling assumption.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown for arguments outside the domain of a function (e.g. s < 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct ModelParams {
    int n = 1;       ///< spatial dimension
    int tau = 0;     ///< 0: parabolic-elliptic, 1: fully parabolic
    double chi = 1;  ///< attraction sensitivity
    double xi = 1;   ///< repulsion sensitivity
    double a = 1;    ///< growth coefficient
    double b = 1;    ///< nonlocal damping coefficient
    double alpha = 1;
    double beta = 1;

    /// Strict check of the modelling assumptions: χ, ξ, a, b > 0, α, β ≥ 1,
    /// τ ∈ {0,1}, n ≥ 1. Throws ParameterError naming the violated one.
    void validate() const;

    /// Relaxed check used by the time stepper: coefficients may vanish
    /// (pure diffusion, taxis-free runs), exponents must still be ≥ 1.
    void validate_for_simulation() const;

    bool operator==(const ModelParams&) const = default;
};

enum class ProductionKind { PowerPrototype, CustomTabulated };

/**
 * Signal production laws f (attractant) and g (repellent).
 *
 * Both kinds must respect the envelopes
 *   0 ≤ f(s) ≤ K1 s^ℓ,    K2 s^ρ ≤ g(s) ≤ K2 s (s+1)^(ρ−1)    for s ≥ 0.
 *
 * PowerPrototype is f = K1 s^ℓ, g = K2 s^ρ. CustomTabulated interpolates
 * piecewise-linearly between samples (s_values must start at 0 and increase
 * strictly) and continues past the last sample s_N as f(s_N)(s/s_N)^ℓ,
 * g(s_N)(s/s_N)^ρ.
 */
struct ProductionSpec {
    ProductionKind kind = ProductionKind::PowerPrototype;
    double ell = 1;
    double rho = 2;
    double k1 = 1;
    double k2 = 1;
    std::vector<double> s_values;
    std::vector<double> f_values;
    std::vector<double> g_values;

    /// Checks exponent/constant ranges and, for tabulated laws, that every
    /// sample lies inside both envelopes. Throws ParameterError.
    void validate() const;

    bool operator==(const ProductionSpec&) const = default;
};

double eval_f(const ProductionSpec& spec, double s);
double eval_g(const ProductionSpec& spec, double s);

/// Envelope bounds at s, independent of the production kind.
double f_upper_envelope(const ProductionSpec& spec, double s);
double g_lower_envelope(const ProductionSpec& spec, double s);
double g_upper_envelope(const ProductionSpec& spec, double s);

struct EnvelopeSample {
    double s = 0;
    double f = 0;
    double g = 0;
    bool f_ok = false;  ///< 0 ≤ f(s) ≤ K1 s^ℓ
    bool g_ok = false;  ///< K2 s^ρ ≤ g(s) ≤ K2 s (s+1)^(ρ−1)
};

struct EnvelopeReport {
    std::vector<EnvelopeSample> samples;
    bool all_pass() const;
};

EnvelopeReport validate_envelope(const ProductionSpec& spec, const std::vector<double>& samples);

// ---------------------------------------------------------------------------
// Regime classification
// ---------------------------------------------------------------------------

enum class Theorem { PE, PP, None };
enum class CaseLabel { A, B, None };
enum class ComparisonRegime { Subquadratic, Superquadratic, None };
enum class Relation { Greater, GreaterEqual, Less, LessEqual };

/// One inequality "lhs REL rhs". slack is positive when the inequality holds
/// with room to spare; for ≤/≥ a zero slack still counts as satisfied.
struct Margin {
    std::string group;  ///< e.g. "PE-A", "PP-B", "subquadratic"
    std::string name;   ///< human-readable inequality
    double lhs = 0;
    double rhs = 0;
    double slack = 0;
    Relation relation = Relation::Greater;
    bool satisfied = false;

    bool operator==(const Margin&) const = default;
};

struct RegimeVerdict {
    Theorem theorem = Theorem::None;
    CaseLabel case_label = CaseLabel::None;
    bool both_cases = false;  ///< A and B both hold; A is reported
    std::vector<Margin> margins;
    ComparisonRegime comparison = ComparisonRegime::None;
    std::vector<Margin> comparison_margins;
    /// Modelling assumptions the inputs break; non-empty forces every verdict to None.
    std::vector<std::string> assumption_violations;

    bool operator==(const RegimeVerdict&) const = default;
};

/// Evaluates the two sufficient boundedness conditions that apply to
/// params.tau, plus the subquadratic/superquadratic comparison conditions.
/// Strict inequalities use exact floating comparison. Inputs outside the
/// modelling assumptions are still evaluated but classify as None.
RegimeVerdict classify_regime(const ModelParams& params, const ProductionSpec& spec);

std::string to_string(Theorem t);
std::string to_string(CaseLabel c);
std::string to_string(ComparisonRegime r);
std::string to_string(Relation r);

}  // namespace chtx

#endif
