#ifndef CHTX_GRID_HPP
#define CHTX_GRID_HPP

/**
 * @file grid.hpp
 * @brief Vertex-centred tensor grids on an interval or rectangle, nodal
 * fields, and the zero-flux finite-difference operators used by the solver.
 *
 * Nodes sit at x_i = i h with h = L / (N − 1), boundary nodes included.
 * Boundary rows of every operator use mirror ghosts (ghost value = first
 * interior value), i.e. a half control volume of width h/2. With trapezoid
 * weights this makes the Laplacian self-adjoint and every flux-form operator
 * exactly conservative.
 *
 * Storage is row-major: node (i0, i1) lives at i0 * counts[1] + i1.
 */

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace chtx {

/// A field value was negative where a nonnegative density is required.
class PositivityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Grid {
public:
    Grid() = default;

    /// Throws std::invalid_argument unless dim ∈ {1,2}, lengths > 0 and
    /// counts ≥ 8 on every used axis.
    Grid(int dim, std::array<double, 2> lengths, std::array<std::size_t, 2> counts);

    static Grid interval(double length, std::size_t count);
    static Grid rectangle(double lx, double ly, std::size_t nx, std::size_t ny);

    int dim() const { return dim_; }
    double length(int axis) const { return lengths_[axis]; }
    std::size_t count(int axis) const { return counts_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    std::size_t size() const { return size_; }
    double measure() const;

    /// Distance between neighbours along axis in the flat index.
    std::size_t stride(int axis) const { return dim_ == 2 && axis == 0 ? counts_[1] : 1; }

    std::size_t index(std::size_t i0, std::size_t i1 = 0) const { return dim_ == 2 ? i0 * counts_[1] + i1 : i0; }

    double coordinate(int axis, std::size_t i) const;

    /// Trapezoid multiplier of node p relative to the interior weight
    /// (1, 1/2 or 1/4). The full quadrature weight is this times h0·h1.
    double weight_factor(std::size_t p) const;

    bool operator==(const Grid&) const = default;

private:
    int dim_ = 1;
    std::array<double, 2> lengths_{1.0, 1.0};
    std::array<std::size_t, 2> counts_{8, 1};
    std::array<double, 2> spacing_{1.0, 1.0};
    std::size_t size_ = 8;
};

class Field {
public:
    Field() = default;
    explicit Field(const Grid& grid, double value = 0.0);
    Field(const Grid& grid, std::vector<double> values);

    /// Samples fn(x, y) at every node (y = 0 in 1D).
    static Field from_function(const Grid& grid, const std::function<double(double, double)>& fn);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t p) const { return values_[p]; }
    double& operator[](std::size_t p) { return values_[p]; }

    double max() const;
    double min() const;
    double linf() const;
    bool all_finite() const;

    bool operator==(const Field&) const = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

enum class FaceValue {
    Centered,  ///< arithmetic mean of the two adjacent nodes
    Upwind     ///< node value upstream of the drift ∇s
};

/// Δ_h φ with mirror-ghost boundary rows.
Field laplacian_neumann(const Field& phi);

/// Composite trapezoid rule, pairwise summation.
double integrate(const Field& phi);

/// ∫ φ^p. Throws PositivityError on a negative node value.
double integrate_power(const Field& phi, double p);

/// Trapezoid-weighted inner product ⟨φ, ψ⟩_w.
double weighted_dot(const Field& phi, const Field& psi);

/**
 * Flux-form ∇·(u ∇s). Face flux u_{i+1/2} (s_{i+1} − s_i)/h, zero flux
 * through the physical boundary, divided by the node's control volume.
 * With FaceValue::Upwind the face density is taken from the node the drift
 * ∇s points away from, so −taxis_divergence(u, s, Upwind) is a monotone
 * discretization of transport with velocity ∇s.
 */
Field taxis_divergence(const Field& u, const Field& s, FaceValue face = FaceValue::Centered);

/// ∫ |∇ u^{k/2}|² from face-centred differences (boundary faces carry zero).
double grad_half_power_norm(const Field& u, double k);

/// Returns max(φ, 0) after checking no node is below −tolerance.
Field positive_part(const Field& phi, double tolerance);

/// Throws std::invalid_argument if the two fields live on different grids.
void require_same_grid(const Field& a, const Field& b);

}  // namespace chtx

#endif
