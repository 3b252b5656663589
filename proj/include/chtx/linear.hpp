#ifndef CHTX_LINEAR_HPP
#define CHTX_LINEAR_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "chtx/grid.hpp"

namespace chtx {

/// Iteration cap hit before the requested residual was reached.
class LinearSolveError : public std::runtime_error {
public:
    LinearSolveError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

    double residual() const { return residual_; }
    int iterations() const { return iterations_; }

private:
    double residual_;
    int iterations_;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;  ///< ‖b − A x‖_w / ‖b‖_w at exit
};

/**
 * The operator A = c0·I − c1·Δ_h (c0 > 0, c1 ≥ 0) with zero-flux Δ_h.
 *
 * W·A is symmetric positive definite for the trapezoid weights W, so A is
 * inverted with conjugate gradients on W·A, preconditioned by a zero-fill
 * incomplete Cholesky factor. On a 1D grid the factor is exact.
 *
 * Constant fields are eigenvectors of A with eigenvalue c0; after the
 * iteration the solution's constant mode is set to ∫b / c0 exactly so the
 * solve conserves quadrature mass to round-off.
 */
class ShiftedLaplacian {
public:
    ShiftedLaplacian(const Grid& grid, double c0, double c1);

    const Grid& grid() const { return grid_; }
    double c0() const { return c0_; }
    double c1() const { return c1_; }

    Field apply(const Field& x) const;

    /// Solves A x = rhs starting from the value already in x until
    /// ‖rhs − A x‖_w ≤ tol·‖rhs‖_w. Throws LinearSolveError past max_iters.
    SolveStats solve(const Field& rhs, Field& x, double tol, int max_iters) const;

private:
    void precondition(const std::vector<double>& r, std::vector<double>& z) const;

    Grid grid_;
    double c0_;
    double c1_;
    std::vector<double> weight_;                 // trapezoid factors
    std::vector<double> diag_;                   // (W A)_pp
    std::array<std::vector<double>, 2> upper_;   // (W A)_{p, p+stride_axis}
    std::vector<double> ic_diag_;                // pivots of the IC(0) factor
};

}  // namespace chtx

#endif
