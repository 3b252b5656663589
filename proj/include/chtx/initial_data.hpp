#ifndef CHTX_INITIAL_DATA_HPP
#define CHTX_INITIAL_DATA_HPP

#include <cstdint>

#include "chtx/config.hpp"
#include "chtx/grid.hpp"

namespace chtx {

/// Smooth zero-flux-compatible perturbation: a random combination of
/// cosine modes cos(mπx/L) (products of them in 2D, m ≤ max_mode), scaled
/// so that |result| ≤ 1 everywhere. Identical for identical (grid, seed).
Field random_cosine_field(const Grid& grid, std::uint64_t seed, int max_mode = 4);

/// baseline + amplitude · random_cosine_field; nonnegative when amplitude ≤ baseline.
Field perturbed_constant(const Grid& grid, double baseline, double amplitude, std::uint64_t seed, int max_mode = 4);

/// baseline + amplitude · exp(−|x − center|² / (2 width²)).
Field gaussian_bump(const Grid& grid, const std::vector<double>& center, double width, double amplitude,
                    double baseline);

/// Materializes an initial-data description on the grid. Snapshot paths
/// are resolved relative to base_dir; their grid must match.
Field make_initial_field(const InitialData& data, const Grid& grid, const std::filesystem::path& base_dir = {});

}  // namespace chtx

#endif
