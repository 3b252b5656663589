#include "chtx/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chtx {

namespace {

// Deterministic pairwise reduction; the split points depend only on n.
double pairwise_sum(const double* data, std::size_t n) {
    if (n <= 16) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

double cell_volume(const Grid& g) { return g.dim() == 2 ? g.spacing(0) * g.spacing(1) : g.spacing(0); }

// Applies fn(p, i_axis, n_axis) for every node, grouping nodes into lines
// along `axis`. Lines are visited in flat-index order of their first node.
template <class Fn>
void for_each_line(const Grid& g, int axis, Fn&& fn) {
    const std::size_t n_axis = g.count(axis);
    const std::size_t stride = g.stride(axis);
    if (g.dim() == 1) {
        fn(std::size_t{0}, stride, n_axis);
        return;
    }
    const int other = 1 - axis;
    for (std::size_t j = 0; j < g.count(other); ++j) {
        const std::size_t start = axis == 0 ? g.index(0, j) : g.index(j, 0);
        fn(start, stride, n_axis);
    }
}

}  // namespace

Grid::Grid(int dim, std::array<double, 2> lengths, std::array<std::size_t, 2> counts) : dim_(dim) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (dim == 1) {
        lengths[1] = 1.0;
        counts[1] = 1;
    }
    for (int a = 0; a < dim; ++a) {
        if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a])) {
            throw std::invalid_argument("grid lengths must be positive and finite");
        }
        if (counts[a] < 8) throw std::invalid_argument("grid needs at least 8 nodes per axis");
    }
    lengths_ = lengths;
    counts_ = counts;
    spacing_ = {lengths[0] / static_cast<double>(counts[0] - 1), 1.0};
    if (dim == 2) spacing_[1] = lengths[1] / static_cast<double>(counts[1] - 1);
    size_ = counts[0] * counts[1];
}

Grid Grid::interval(double length, std::size_t count) { return Grid(1, {length, 1.0}, {count, 1}); }

Grid Grid::rectangle(double lx, double ly, std::size_t nx, std::size_t ny) { return Grid(2, {lx, ly}, {nx, ny}); }

double Grid::measure() const { return dim_ == 2 ? lengths_[0] * lengths_[1] : lengths_[0]; }

double Grid::coordinate(int axis, std::size_t i) const {
    if (i + 1 == counts_[axis]) return lengths_[axis];
    return static_cast<double>(i) * spacing_[axis];
}

double Grid::weight_factor(std::size_t p) const {
    auto edge = [](std::size_t i, std::size_t n) { return i == 0 || i + 1 == n ? 0.5 : 1.0; };
    if (dim_ == 1) return edge(p, counts_[0]);
    return edge(p / counts_[1], counts_[0]) * edge(p % counts_[1], counts_[1]);
}

Field::Field(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw std::invalid_argument("field size does not match grid node count");
}

Field Field::from_function(const Grid& grid, const std::function<double(double, double)>& fn) {
    Field f(grid);
    if (grid.dim() == 1) {
        for (std::size_t i = 0; i < grid.count(0); ++i) f[i] = fn(grid.coordinate(0, i), 0.0);
    } else {
        for (std::size_t i = 0; i < grid.count(0); ++i) {
            for (std::size_t j = 0; j < grid.count(1); ++j) {
                f[grid.index(i, j)] = fn(grid.coordinate(0, i), grid.coordinate(1, j));
            }
        }
    }
    return f;
}

double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }

double Field::linf() const {
    double m = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool Field::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("fields live on different grids");
}

Field laplacian_neumann(const Field& phi) {
    const Grid& g = phi.grid();
    Field out(g);
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double inv_h2 = 1.0 / (g.spacing(axis) * g.spacing(axis));
        for_each_line(g, axis, [&](std::size_t start, std::size_t stride, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t p = start + i * stride;
                const std::size_t left = i > 0 ? p - stride : p + stride;
                const std::size_t right = i + 1 < n ? p + stride : p - stride;
                out[p] += (phi[left] - 2.0 * phi[p] + phi[right]) * inv_h2;
            }
        });
    }
    return out;
}

double integrate(const Field& phi) {
    const Grid& g = phi.grid();
    std::vector<double> terms(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) terms[p] = g.weight_factor(p) * phi[p];
    // Σ' φ · |Ω| / #cells keeps constants exact on power-of-two lengths.
    double cells = static_cast<double>(g.count(0) - 1);
    if (g.dim() == 2) cells *= static_cast<double>(g.count(1) - 1);
    return pairwise_sum(terms) * g.measure() / cells;
}

double integrate_power(const Field& phi, double p) {
    const Grid& g = phi.grid();
    Field powered(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (phi[i] < 0.0) {
            throw PositivityError("integrate_power: negative node value " + std::to_string(phi[i]));
        }
        powered[i] = std::pow(phi[i], p);
    }
    return integrate(powered);
}

double weighted_dot(const Field& phi, const Field& psi) {
    require_same_grid(phi, psi);
    const Grid& g = phi.grid();
    std::vector<double> terms(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) terms[p] = g.weight_factor(p) * phi[p] * psi[p];
    return pairwise_sum(terms) * cell_volume(g);
}

Field taxis_divergence(const Field& u, const Field& s, FaceValue face) {
    require_same_grid(u, s);
    const Grid& g = u.grid();
    Field out(g);
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double h = g.spacing(axis);
        for_each_line(g, axis, [&](std::size_t start, std::size_t stride, std::size_t n) {
            double flux_left = 0.0;  // zero flux through the physical boundary
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t p = start + i * stride;
                double flux_right = 0.0;
                if (i + 1 < n) {
                    const std::size_t q = p + stride;
                    const double ds = s[q] - s[p];
                    double u_face;
                    if (face == FaceValue::Centered) {
                        u_face = 0.5 * (u[p] + u[q]);
                    } else {
                        u_face = ds > 0.0 ? u[p] : u[q];
                    }
                    flux_right = u_face * ds / h;
                }
                const bool boundary = i == 0 || i + 1 == n;
                const double volume = boundary ? 0.5 * h : h;
                out[p] += (flux_right - flux_left) / volume;
                flux_left = flux_right;
            }
        });
    }
    return out;
}

double grad_half_power_norm(const Field& u, double k) {
    const Grid& g = u.grid();
    std::vector<double> w(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
        if (u[p] < 0.0) throw PositivityError("grad_half_power_norm: negative node value " + std::to_string(u[p]));
        w[p] = std::pow(u[p], 0.5 * k);
    }
    std::vector<double> terms;
    terms.reserve(g.dim() * g.size());
    for (int axis = 0; axis < g.dim(); ++axis) {
        const double h = g.spacing(axis);
        for_each_line(g, axis, [&](std::size_t start, std::size_t stride, std::size_t n) {
            // transverse trapezoid factor is shared by every face on this line
            const double transverse = g.dim() == 2 ? g.weight_factor(start) / 0.5 : 1.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const std::size_t p = start + i * stride;
                const double d = (w[p + stride] - w[p]) / h;
                terms.push_back(transverse * d * d);
            }
        });
    }
    return pairwise_sum(terms) * cell_volume(g);
}

Field positive_part(const Field& phi, double tolerance) {
    Field out(phi.grid());
    for (std::size_t p = 0; p < phi.size(); ++p) {
        if (phi[p] < -tolerance) {
            throw PositivityError("negative density " + std::to_string(phi[p]) + " below tolerance");
        }
        out[p] = std::max(phi[p], 0.0);
    }
    return out;
}

}  // namespace chtx
