#include "kinreact/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kinreact/errors.hpp"

namespace kinreact {

EquilibriumState equilibrium_from_initial(const DistributionPair& f_in,
                                          const DiscreteProfiles& profiles,
                                          const PhaseMesh& mesh) {
    const double m0 = mass_difference(f_in, mesh);
    const double t = mesh.torus_length;
    // Positive root of |T| rho^2 - M0 rho - |T| = 0, i.e. |T|(rho - 1/rho) = M0.
    const double rho = (m0 + std::sqrt(m0 * m0 + 4.0 * t * t)) / (2.0 * t);

    EquilibriumState eq;
    eq.rho_star = rho;
    eq.rho1_star = rho;
    eq.rho2_star = 1.0 / rho;
    eq.f1_star.resize(profiles.chi1.size());
    eq.f2_star.resize(profiles.chi2.size());
    for (std::size_t j = 0; j < profiles.chi1.size(); ++j) {
        eq.f1_star[j] = eq.rho1_star * profiles.chi1[j];
        eq.f2_star[j] = eq.rho2_star * profiles.chi2[j];
    }
    return eq;
}

double upwind_flux(double f_left, double f_right, double v, double dv) {
    const double vp = std::max(v, 0.0);
    const double vm = std::min(v, 0.0);
    return dv * (vp * f_left + vm * f_right);
}

double upwind_flux_viscous_form(double f_left, double f_right, double v, double dv) {
    // dv (v (f_left + f_right)/2 - (|v|/2)(f_right - f_left)), evaluated with
    // error-free transformations: the centered and viscous parts cancel down
    // to the upstream value, and naive rounding would lose several ulp of the
    // advertised equivalence with the upwind form.
    const double hv = 0.5 * v;
    const double hav = 0.5 * std::abs(v);
    const double s = f_left + f_right;
    const double b1 = s - f_left;
    const double s_err = (f_left - (s - b1)) + (f_right - b1);
    const double d = f_right - f_left;
    const double b2 = d - f_right;
    const double d_err = (f_right - (d - b2)) + (-f_left - b2);
    const double p = hv * s;
    const double p_err = std::fma(hv, s, -p);
    const double q = hav * d;
    const double q_err = std::fma(hav, d, -q);
    const double correction = (p_err - q_err) + (hv * s_err - hav * d_err);
    return dv * ((p - q) + correction);
}

DistributionPair clamp_to_sandwich(const DistributionPair& f, const DiscreteProfiles& profiles,
                                   double rho_m, double rho_M) {
    DistributionPair out = f;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < f.n_x; ++i)
        for (int j = 0; j < f.n_v; ++j) {
            const auto k = static_cast<std::size_t>(j);
            out.at1(i, j) = std::clamp(f.at1(i, j), rho_m * profiles.chi1[k],
                                       rho_M * profiles.chi1[k]);
            out.at2(i, j) = std::clamp(f.at2(i, j), profiles.chi2[k] / rho_M,
                                       profiles.chi2[k] / rho_m);
        }
    return out;
}

double check_maximum_principle(const DistributionPair& f, const DiscreteProfiles& profiles,
                               const SchemeParams& params) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < f.n_x; ++i)
        for (int j = 0; j < f.n_v; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const double lo1 = params.rho_m * profiles.chi1[k];
            const double hi1 = params.rho_M * profiles.chi1[k];
            const double lo2 = profiles.chi2[k] / params.rho_M;
            const double hi2 = profiles.chi2[k] / params.rho_m;
            worst = std::max({worst, lo1 - f.at1(i, j), f.at1(i, j) - hi1,
                              lo2 - f.at2(i, j), f.at2(i, j) - hi2});
        }
    return worst;
}

void solve_cyclic_bidiagonal(std::span<const double> diag, double off, int neighbor,
                             std::span<const double> rhs, std::span<double> out) {
    const int n = static_cast<int>(diag.size());
    if (!(off >= 0.0))
        throw SingularTransportSolve("negative off-diagonal coefficient");
    for (int i = 0; i < n; ++i)
        if (!(diag[static_cast<std::size_t>(i)] > off))
            throw SingularTransportSolve("lost diagonal dominance at row " + std::to_string(i));

    // x[i] depends on its upstream neighbor; parameterize by the unknown
    // closing value t and substitute once around the cycle:
    //   x[i] = p[i] + q[i] t.
    std::vector<double> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
    if (neighbor == -1) {
        // t = x[n-1]; forward sweep i = 0..n-1 with x[-1] = t.
        p[0] = rhs[0] / diag[0];
        q[0] = off / diag[0];
        for (int i = 1; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            p[k] = (rhs[k] + off * p[k - 1]) / diag[k];
            q[k] = off * q[k - 1] / diag[k];
        }
        const double denom = 1.0 - q[static_cast<std::size_t>(n - 1)];
        if (!(denom > 0.0))
            throw SingularTransportSolve("periodic closure is singular");
        const double t = p[static_cast<std::size_t>(n - 1)] / denom;
        for (int i = 0; i < n - 1; ++i) {
            const auto k = static_cast<std::size_t>(i);
            out[k] = p[k] + q[k] * t;
        }
        out[static_cast<std::size_t>(n - 1)] = t;
    } else if (neighbor == +1) {
        // t = x[0]; backward sweep i = n-1..0 with x[n] = t.
        const auto last = static_cast<std::size_t>(n - 1);
        p[last] = rhs[last] / diag[last];
        q[last] = off / diag[last];
        for (int i = n - 2; i >= 0; --i) {
            const auto k = static_cast<std::size_t>(i);
            p[k] = (rhs[k] + off * p[k + 1]) / diag[k];
            q[k] = off * q[k + 1] / diag[k];
        }
        const double denom = 1.0 - q[0];
        if (!(denom > 0.0))
            throw SingularTransportSolve("periodic closure is singular");
        const double t = p[0] / denom;
        for (int i = 1; i < n; ++i) {
            const auto k = static_cast<std::size_t>(i);
            out[k] = p[k] + q[k] * t;
        }
        out[0] = t;
    } else {
        throw SingularTransportSolve("neighbor offset must be -1 or +1");
    }
}

namespace {

/// One Picard sweep: with frozen reaction densities rho_bar, solve for each
/// species and velocity cell the linear cyclic system
///   (1/dt + rho_bar_other,i + |v_j|/dx) f_ij - (|v_j|/dx) f_(i -+ 1)j
///     = f^n_ij/dt + chi_kj.
void picard_sweep(const DistributionPair& f_n, const SpatialPair& rho_bar,
                  const DiscreteProfiles& profiles, const PhaseMesh& mesh, double dt,
                  DistributionPair& out) {
    const int n_x = mesh.n_x;
    const int n_v = mesh.n_v();

#pragma omp parallel for schedule(static)
    for (int task = 0; task < 2 * n_v; ++task) {
        const int species = task < n_v ? 1 : 2;
        const int j = task % n_v;
        const double v = mesh.v_centers[static_cast<std::size_t>(j)];
        const double c = std::abs(v) / mesh.dx;
        const int neighbor = v > 0.0 ? -1 : +1;
        const std::vector<double>& rho_other = species == 1 ? rho_bar.c2 : rho_bar.c1;
        const double chi = species == 1 ? profiles.chi1[static_cast<std::size_t>(j)]
                                        : profiles.chi2[static_cast<std::size_t>(j)];

        std::vector<double> diag(static_cast<std::size_t>(n_x));
        std::vector<double> rhs(static_cast<std::size_t>(n_x));
        std::vector<double> col(static_cast<std::size_t>(n_x));
        for (int i = 0; i < n_x; ++i) {
            const auto k = static_cast<std::size_t>(i);
            diag[k] = 1.0 / dt + rho_other[k] + c;
            const double fn = species == 1 ? f_n.at1(i, j) : f_n.at2(i, j);
            rhs[k] = fn / dt + chi;
        }
        solve_cyclic_bidiagonal(diag, c, neighbor, rhs, col);
        for (int i = 0; i < n_x; ++i) {
            if (species == 1)
                out.at1(i, j) = col[static_cast<std::size_t>(i)];
            else
                out.at2(i, j) = col[static_cast<std::size_t>(i)];
        }
    }
}

double sup_diff(const DistributionPair& a, const DistributionPair& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.f1.size(); ++k) m = std::max(m, std::abs(a.f1[k] - b.f1[k]));
    for (std::size_t k = 0; k < a.f2.size(); ++k) m = std::max(m, std::abs(a.f2[k] - b.f2[k]));
    return m;
}

} // namespace

std::pair<DistributionPair, StepReport> implicit_step(const DistributionPair& f_n,
                                                      const DiscreteProfiles& profiles,
                                                      const PhaseMesh& mesh,
                                                      const SchemeParams& params) {
    // v_{1/2} = 0 lies on an interface, never at a midpoint; the upwind
    // direction is well defined for every velocity cell.
    for (double v : mesh.v_centers)
        if (v == 0.0) throw SingularTransportSolve("velocity midpoint at zero");

    if (params.enforce_bounds) {
        const double violation = check_maximum_principle(f_n, profiles, params);
        const double slack = 1000.0 * params.picard_tol * std::max(1.0, sup_norm(f_n));
        if (violation > slack)
            throw BoundsRejected("input state violates the declared sandwich by " +
                                 std::to_string(violation));
    }

    DistributionPair cur = f_n;
    DistributionPair next = DistributionPair::zeros(mesh);
    StepReport report;
    bool converged = false;

    for (int iter = 1; iter <= params.picard_max_iter; ++iter) {
        const DistributionPair fbar = clamp_to_sandwich(cur, profiles, params.rho_m, params.rho_M);
        const SpatialPair rho_bar = densities(fbar, mesh);
        picard_sweep(f_n, rho_bar, profiles, mesh, params.dt, next);

        report.residual = sup_diff(next, cur) / std::max(1.0, sup_norm(next));
        report.picard_iterations = iter;
        std::swap(cur, next);
        if (report.residual <= params.picard_tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw PicardDiverged("no fixed point after " + std::to_string(params.picard_max_iter) +
                             " sweeps, residual " + std::to_string(report.residual));

    // At the accepted solution the clamp should be inactive up to solver
    // tolerance; an active clamp here means the fixed point left the sandwich.
    const DistributionPair clamped = clamp_to_sandwich(cur, profiles, params.rho_m, params.rho_M);
    const double moved = sup_diff(clamped, cur);
    report.truncation_active = moved > 10.0 * params.picard_tol * std::max(1.0, sup_norm(cur));
    report.bounds_violation = check_maximum_principle(cur, profiles, params);

    return {std::move(cur), report};
}

} // namespace kinreact
