#include "chtx/linear.hpp"

#include <cmath>

namespace chtx {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// ‖W^{-1} r_s‖_w where r_s = W r is a residual of the symmetrized system.
double weighted_norm_of_scaled(const std::vector<double>& rs, const std::vector<double>& weight) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) acc += rs[i] * rs[i] / weight[i];
    return std::sqrt(acc);
}

}  // namespace

ShiftedLaplacian::ShiftedLaplacian(const Grid& grid, double c0, double c1) : grid_(grid), c0_(c0), c1_(c1) {
    if (!(c0 > 0.0) || !(c1 >= 0.0)) throw std::invalid_argument("ShiftedLaplacian needs c0 > 0 and c1 >= 0");
    const std::size_t n = grid.size();
    weight_.resize(n);
    diag_.resize(n);
    for (std::size_t p = 0; p < n; ++p) weight_[p] = grid.weight_factor(p);

    double lap_diag = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis) lap_diag += 2.0 / (grid.spacing(axis) * grid.spacing(axis));
    for (std::size_t p = 0; p < n; ++p) diag_[p] = weight_[p] * (c0 + c1 * lap_diag);

    for (int axis = 0; axis < grid.dim(); ++axis) {
        const std::size_t stride = grid.stride(axis);
        const std::size_t count = grid.count(axis);
        const double inv_h2 = 1.0 / (grid.spacing(axis) * grid.spacing(axis));
        auto& up = upper_[axis];
        up.assign(n, 0.0);
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t i = (p / stride) % count;
            if (i + 1 == count) continue;
            // The mirror row doubles the boundary coupling while W halves it,
            // so both ends of an edge see the transverse weight only.
            const double transverse = weight_[p] / (i == 0 ? 0.5 : 1.0);
            up[p] = -c1 * transverse * inv_h2;
        }
    }

    ic_diag_.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        double d = diag_[p];
        for (int axis = 0; axis < grid.dim(); ++axis) {
            const std::size_t stride = grid.stride(axis);
            const std::size_t i = (p / stride) % grid.count(axis);
            if (i == 0) continue;
            const double s = upper_[axis][p - stride];
            d -= s * s / ic_diag_[p - stride];
        }
        ic_diag_[p] = d;
    }
}

Field ShiftedLaplacian::apply(const Field& x) const {
    require_same_grid(x, Field(grid_));
    Field lap = laplacian_neumann(x);
    Field out(grid_);
    for (std::size_t p = 0; p < grid_.size(); ++p) out[p] = c0_ * x[p] - c1_ * lap[p];
    return out;
}

void ShiftedLaplacian::precondition(const std::vector<double>& r, std::vector<double>& z) const {
    const std::size_t n = r.size();
    const int dim = grid_.dim();
    // (D + L) t = r
    for (std::size_t p = 0; p < n; ++p) {
        double acc = r[p];
        for (int axis = 0; axis < dim; ++axis) {
            const std::size_t stride = grid_.stride(axis);
            if ((p / stride) % grid_.count(axis) == 0) continue;
            acc -= upper_[axis][p - stride] * z[p - stride];
        }
        z[p] = acc / ic_diag_[p];
    }
    // (D + Lᵀ) z = D t
    for (std::size_t p = n; p-- > 0;) {
        double acc = 0.0;
        for (int axis = 0; axis < dim; ++axis) {
            const std::size_t stride = grid_.stride(axis);
            if ((p / stride) % grid_.count(axis) + 1 == grid_.count(axis)) continue;
            acc += upper_[axis][p] * z[p + stride];
        }
        z[p] -= acc / ic_diag_[p];
    }
}

SolveStats ShiftedLaplacian::solve(const Field& rhs, Field& x, double tol, int max_iters) const {
    require_same_grid(rhs, Field(grid_));
    if (x.size() != grid_.size() || !(x.grid() == grid_)) x = Field(grid_);
    const std::size_t n = grid_.size();

    std::vector<double> b(n);
    for (std::size_t p = 0; p < n; ++p) b[p] = weight_[p] * rhs[p];
    const double b_norm = weighted_norm_of_scaled(b, weight_);
    SolveStats stats;
    if (b_norm == 0.0) {
        x = Field(grid_);
        return stats;
    }

    const Field ax = apply(x);
    std::vector<double> r(n);
    for (std::size_t p = 0; p < n; ++p) r[p] = b[p] - weight_[p] * ax[p];
    double res = weighted_norm_of_scaled(r, weight_) / b_norm;
    stats.relative_residual = res;
    if (res <= tol) return stats;

    std::vector<double> z(n), dir(n), q(n);
    precondition(r, z);
    dir = z;
    double rz = dot(r, z);
    auto& xv = x.values();
    while (true) {
        if (stats.iterations >= max_iters) {
            throw LinearSolveError("linear solve did not reach tolerance within " + std::to_string(max_iters) +
                                       " iterations (residual " + std::to_string(res) + ")",
                                   res, stats.iterations);
        }
        // q = (W A) dir
        for (std::size_t p = 0; p < n; ++p) {
            double acc = diag_[p] * dir[p];
            for (int axis = 0; axis < grid_.dim(); ++axis) {
                const std::size_t stride = grid_.stride(axis);
                const std::size_t i = (p / stride) % grid_.count(axis);
                if (i > 0) acc += upper_[axis][p - stride] * dir[p - stride];
                if (i + 1 < grid_.count(axis)) acc += upper_[axis][p] * dir[p + stride];
            }
            q[p] = acc;
        }
        const double step = rz / dot(dir, q);
        for (std::size_t p = 0; p < n; ++p) {
            xv[p] += step * dir[p];
            r[p] -= step * q[p];
        }
        ++stats.iterations;
        res = weighted_norm_of_scaled(r, weight_) / b_norm;
        stats.relative_residual = res;
        if (res <= tol) break;
        precondition(r, z);
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t p = 0; p < n; ++p) dir[p] = z[p] + beta * dir[p];
    }

    // Restore the constant mode exactly: 1ᵀ W A x = c0 · 1ᵀ W x.
    double target = 0.0;
    double current = 0.0;
    double total_weight = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        target += b[p];
        current += weight_[p] * xv[p];
        total_weight += weight_[p];
    }
    const double shift = (target / c0_ - current) / total_weight;
    for (auto& v : xv) v += shift;
    return stats;
}

}  // namespace chtx
