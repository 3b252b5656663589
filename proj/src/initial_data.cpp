#include "chtx/initial_data.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "chtx/snapshot.hpp"

namespace chtx {

namespace {

// Uniform in [-1, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double symmetric_unit(std::mt19937_64& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

}  // namespace

Field random_cosine_field(const Grid& grid, std::uint64_t seed, int max_mode) {
    std::mt19937_64 rng(seed);
    const int modes_y = grid.dim() == 2 ? max_mode : 0;
    struct Mode {
        int mx, my;
        double c;
    };
    std::vector<Mode> modes;
    double norm = 0.0;
    for (int mx = 0; mx <= max_mode; ++mx) {
        for (int my = 0; my <= modes_y; ++my) {
            if (mx == 0 && my == 0) continue;
            const double c = symmetric_unit(rng);
            modes.push_back({mx, my, c});
            norm += std::abs(c);
        }
    }
    const double pi = std::numbers::pi;
    const double lx = grid.length(0);
    const double ly = grid.dim() == 2 ? grid.length(1) : 1.0;
    return Field::from_function(grid, [&](double x, double y) {
        double acc = 0.0;
        for (const auto& m : modes) acc += m.c * std::cos(m.mx * pi * x / lx) * std::cos(m.my * pi * y / ly);
        return norm > 0.0 ? acc / norm : 0.0;
    });
}

Field perturbed_constant(const Grid& grid, double baseline, double amplitude, std::uint64_t seed, int max_mode) {
    Field f = random_cosine_field(grid, seed, max_mode);
    for (auto& v : f.values()) v = std::max(0.0, baseline + amplitude * v);
    return f;
}

Field gaussian_bump(const Grid& grid, const std::vector<double>& center, double width, double amplitude,
                    double baseline) {
    const double cx = center.empty() ? 0.5 * grid.length(0) : center[0];
    const double cy = center.size() > 1 ? center[1] : 0.0;
    const double inv = 1.0 / (2.0 * width * width);
    return Field::from_function(grid, [&](double x, double y) {
        double r2 = (x - cx) * (x - cx);
        if (grid.dim() == 2) r2 += (y - cy) * (y - cy);
        return baseline + amplitude * std::exp(-r2 * inv);
    });
}

Field make_initial_field(const InitialData& data, const Grid& grid, const std::filesystem::path& base_dir) {
    switch (data.kind) {
        case InitialKind::Constant: return Field(grid, data.value);
        case InitialKind::GaussianBump:
            return gaussian_bump(grid, data.center, data.width, data.amplitude, data.baseline);
        case InitialKind::PerturbedConstant:
            return perturbed_constant(grid, data.baseline, data.amplitude, data.seed);
        case InitialKind::FromSnapshot: {
            std::filesystem::path p(data.path);
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            Field f = read_snapshot(p);
            if (!(f.grid() == grid)) throw SnapshotError("snapshot " + p.string() + " does not match the domain grid");
            return f;
        }
    }
    throw std::logic_error("unhandled initial data kind");
}

}  // namespace chtx
