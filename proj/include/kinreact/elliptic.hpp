#pragma once

#include <vector>

#include "kinreact/mesh.hpp"
#include "kinreact/state.hpp"

namespace kinreact {

struct PoissonSolve {
    std::vector<double> phi1, phi2;
    // Per-species spatial mean subtracted from the right-hand side before
    // solving. Individual species masses are not conserved in time, so the
    // input need not be mean-free; the centered Laplacian only reaches the
    // zero-mean subspace.
    double mean_removed1 = 0.0;
    double mean_removed2 = 0.0;
};

/// Solves -D_x^c D_x^c phi_k = rho_k - mean(rho_k) with the zero-mean gauge
/// sum_i dx phi_k = 0. The operator couples i to i+-2 with weight 1/(4 dx^2);
/// on an odd torus that shift generates the full cycle, so the kernel is the
/// constants and the gauged problem is uniquely solvable.
///
/// A dense factorization of the augmented system (Laplacian rows plus the
/// gauge row) is taken once at construction and reused as an explicit solve
/// operator, so repeated solves are deterministic matrix-vector products.
class PoissonSolver {
public:
    explicit PoissonSolver(const PhaseMesh& mesh);

    PoissonSolve solve(const SpatialPair& rho_tilde) const;

private:
    int n_ = 0;
    double dx_ = 0.0;
    std::vector<double> op_; // n x n solve operator, row-major

    std::vector<double> apply(std::span<const double> rhs, double* mean_out) const;
};

/// Best constant in ||U|| <= C_P ||D_x^c U|| over zero-mean fields, computed
/// as the reciprocal of the smallest nonzero singular value of D_x^c.
/// Approaches 1/pi (times the torus length) as the grid is refined.
double poincare_constant(const PhaseMesh& mesh);

} // namespace kinreact
