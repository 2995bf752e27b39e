#include "kinreact/elliptic.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <string>

#include "kinreact/errors.hpp"
#include "kinreact/reduce.hpp"

namespace kinreact {

namespace {

Eigen::MatrixXd centered_gradient_matrix(int n, double dx) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        const int im = (i == 0) ? n - 1 : i - 1;
        c(i, ip) += 1.0 / (2.0 * dx);
        c(i, im) -= 1.0 / (2.0 * dx);
    }
    return c;
}

} // namespace

PoissonSolver::PoissonSolver(const PhaseMesh& mesh) : n_(mesh.n_x), dx_(mesh.dx) {
    if (n_ % 2 == 0)
        throw EvenGridUnsupported("centered Laplacian has a non-trivial kernel on even grids (n_x=" +
                                  std::to_string(n_) + ")");

    const Eigen::MatrixXd c = centered_gradient_matrix(n_, dx_);
    const Eigen::MatrixXd lap = -(c * c); // -D_x^c D_x^c

    // Augmented system: Laplacian rows plus the zero-mean gauge row. The
    // right-hand side is projected onto zero mean, so the system is
    // consistent and the least-squares solve is exact.
    Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n_ + 1, n_);
    aug.topRows(n_) = lap;
    aug.bottomRows(1).setOnes();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aug);

    op_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0.0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_ + 1);
    for (int k = 0; k < n_; ++k) {
        rhs.setZero();
        // Mean-removed unit vector in the k-th column.
        for (int i = 0; i < n_; ++i) rhs(i) = (i == k ? 1.0 : 0.0) - 1.0 / n_;
        const Eigen::VectorXd col = qr.solve(rhs);
        for (int i = 0; i < n_; ++i)
            op_[static_cast<std::size_t>(i) * n_ + static_cast<std::size_t>(k)] = col(i);
    }
}

std::vector<double> PoissonSolver::apply(std::span<const double> rhs, double* mean_out) const {
    Accumulator m;
    for (double x : rhs) m.add(x);
    const double mean = m.value() / n_;
    if (mean_out) *mean_out = mean;

    std::vector<double> phi(static_cast<std::size_t>(n_));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_; ++i) {
        Accumulator acc;
        const double* row = op_.data() + static_cast<std::size_t>(i) * n_;
        for (int k = 0; k < n_; ++k) acc.add(row[k] * (rhs[static_cast<std::size_t>(k)] - mean));
        phi[static_cast<std::size_t>(i)] = acc.value();
    }
    return phi;
}

PoissonSolve PoissonSolver::solve(const SpatialPair& rho_tilde) const {
    PoissonSolve out;
    out.phi1 = apply(rho_tilde.c1, &out.mean_removed1);
    out.phi2 = apply(rho_tilde.c2, &out.mean_removed2);
    return out;
}

double poincare_constant(const PhaseMesh& mesh) {
    const int n = mesh.n_x;
    const Eigen::MatrixXd c = centered_gradient_matrix(n, mesh.dx);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
    const Eigen::VectorXd& sv = svd.singularValues(); // descending
    const double cutoff = sv(0) * n * 1e-13;
    double smallest = sv(0);
    for (int i = 0; i < n; ++i)
        if (sv(i) > cutoff) smallest = sv(i);
    return 1.0 / smallest;
}

} // namespace kinreact
