#ifndef CHTX_CONFIG_HPP
#define CHTX_CONFIG_HPP

/**
 * @file config.hpp
 * @brief Sectioned key-value run configuration.
 *
 * @code
 *   # comment
 *   [domain]
 *   dim = 1
 *   lengths = 1
 *   counts = 128
 *
 *   [params]
 *   tau = 0
 *   chi = 1
 *   ...
 * @endcode
 *
 * Sections: [domain] [params] [production] [initial.u] [initial.v]
 * [initial.w] [solver] [output] [sweep] [audit]. The first four are
 * required; [initial.v] and [initial.w] are required only for tau = 1.
 * Keys are lower_snake_case, lists are comma separated, unknown sections
 * and keys are errors.
 */

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chtx/grid.hpp"
#include "chtx/model.hpp"
#include "chtx/state.hpp"

namespace chtx {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DomainSpec {
    int dim = 1;
    std::array<double, 2> lengths{1.0, 1.0};
    std::array<std::size_t, 2> counts{64, 1};

    Grid grid() const { return Grid(dim, lengths, counts); }
    bool operator==(const DomainSpec&) const = default;
};

enum class InitialKind { Constant, GaussianBump, PerturbedConstant, FromSnapshot };

struct InitialData {
    InitialKind kind = InitialKind::Constant;
    double value = 0;            ///< Constant
    std::vector<double> center;  ///< GaussianBump, one entry per axis
    double width = 0.1;          ///< GaussianBump standard deviation
    double amplitude = 0;        ///< GaussianBump, PerturbedConstant
    double baseline = 0;         ///< GaussianBump, PerturbedConstant
    std::uint64_t seed = 0;      ///< PerturbedConstant
    std::string path;            ///< FromSnapshot

    bool operator==(const InitialData&) const = default;
};

struct OutputSpec {
    std::string dir = ".";
    std::string diagnostics_csv = "diagnostics.csv";
    std::string summary_json = "summary.json";
    long snapshot_every = 0;  ///< accepted steps between snapshots, 0 = none
    std::string snapshot_prefix = "snapshot";
    std::string sweep_csv = "sweep.csv";

    bool operator==(const OutputSpec&) const = default;
};

struct SweepAxis {
    std::string name;
    std::vector<double> values;

    bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
    std::vector<SweepAxis> axes;
    bool classify_only = false;

    bool operator==(const SweepSpec&) const = default;
};

struct AuditSpec {
    std::vector<double> k{2, 4, 8};
    std::vector<double> rho{2};
    std::vector<int> n{1, 2};
    int samples = 50;
    std::uint64_t seed = 1;
    std::size_t counts = 128;

    bool operator==(const AuditSpec&) const = default;
};

struct RunConfig {
    DomainSpec domain;
    ModelParams params;
    ProductionSpec production;
    InitialData initial_u;
    std::optional<InitialData> initial_v;
    std::optional<InitialData> initial_w;
    SolverConfig solver;
    OutputSpec output;
    SweepSpec sweep;
    std::optional<AuditSpec> audit;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; every modelling assumption is checked here.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Parameters a sweep axis may vary.
const std::vector<std::string>& sweepable_parameters();

/// Sets one sweepable parameter. Throws ConfigError for unknown names.
void apply_parameter(RunConfig& config, const std::string& name, double value);

/// Re-runs every parse-time validation on an in-memory config.
void validate_config(const RunConfig& config);

}  // namespace chtx

#endif
