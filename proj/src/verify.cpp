#include "kinreact/verify.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "kinreact/diagnostics.hpp"
#include "kinreact/driver.hpp"
#include "kinreact/elliptic.hpp"
#include "kinreact/reference.hpp"
#include "kinreact/scheme.hpp"
#include "kinreact/testing.hpp"

namespace kinreact {

namespace {

using testing::random_deviation;
using testing::random_field;
using testing::random_sandwich_state;
using testing::random_spatial_pair;
using testing::random_state;
using testing::random_zero_mean_field;

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// ULP distance between two finite doubles of the same sign (0 counts as
/// either sign).
std::uint64_t ulp_distance(double a, double b) {
    if (a == b) return 0;
    if (std::signbit(a) != std::signbit(b) && a != 0.0 && b != 0.0)
        return UINT64_MAX;
    const auto to_ordered = [](double x) {
        auto bits = std::bit_cast<std::uint64_t>(std::abs(x));
        return bits;
    };
    const std::uint64_t ua = to_ordered(a), ub = to_ordered(b);
    return ua > ub ? ua - ub : ub - ua;
}

struct Suite {
    std::vector<CheckOutcome> outcomes;

    void report(const std::string& name, bool pass, double worst, const std::string& detail) {
        outcomes.push_back({name, pass, worst, detail});
    }
};

} // namespace

std::vector<CheckOutcome> verify_properties(const RunConfig& cfg, std::uint64_t seed) {
    Setup s = build_setup(cfg);
    const PhaseMesh& mesh = s.mesh;
    std::mt19937_64 rng(seed);
    Suite suite;

    // Velocity grid symmetry and the index involution.
    {
        double sum = 0.0, worst = 0.0;
        bool ok = true;
        for (int a = 0; a < mesh.n_v(); ++a) {
            sum += mesh.v_centers[static_cast<std::size_t>(a)];
            if (mesh.mirror(mesh.mirror(a)) != a) ok = false;
            if (mesh.v_centers[static_cast<std::size_t>(a)] !=
                -mesh.v_centers[static_cast<std::size_t>(mesh.mirror(a))])
                ok = false;
        }
        worst = std::abs(sum);
        const double tol = mesh.n_v() * 1e-16 * mesh.v_max;
        suite.report("mesh_symmetry", ok && worst <= tol, worst,
                     "velocity midpoints antisymmetric, zero sum");
    }

    // Profile invariants: positivity, unit mass, bitwise symmetry, moments.
    {
        bool ok = true;
        double worst = 0.0;
        for (const auto* chi : {&s.profiles.chi1, &s.profiles.chi2}) {
            const ProfileMoments m = profile_moments(*chi, mesh);
            worst = std::max({worst, std::abs(m.mass - 1.0), std::abs(m.first_moment),
                              std::abs(m.skew_moment)});
            if (!(m.d > 0.0) || !(m.q >= 0.0)) ok = false;
            for (int a = 0; a < mesh.n_v(); ++a) {
                const auto k = static_cast<std::size_t>(a);
                if (!((*chi)[k] > 0.0)) ok = false;
                if ((*chi)[k] != (*chi)[static_cast<std::size_t>(mesh.mirror(a))]) ok = false;
            }
        }
        suite.report("profile_invariants", ok && worst <= 1e-14, worst,
                     "unit mass, symmetry, vanishing odd moments");
    }

    // Discrete integration-by-parts identities for the gradients.
    {
        double worst = 0.0;
        const auto wnorm = [&](const SpatialPair& u) { return norm_macro(u, s.eq, mesh); };
        for (int trial = 0; trial < 100; ++trial) {
            const SpatialPair u = random_spatial_pair(mesh.n_x, rng);
            const SpatialPair w = random_spatial_pair(mesh.n_x, rng);
            const auto dc = [&](const SpatialPair& p) {
                return SpatialPair{grad_centered(p.c1, mesh.dx), grad_centered(p.c2, mesh.dx)};
            };
            const auto dp = [&](const SpatialPair& p) {
                return SpatialPair{grad_forward(p.c1, mesh.dx), grad_forward(p.c2, mesh.dx)};
            };
            const auto dm = [&](const SpatialPair& p) {
                return SpatialPair{grad_backward(p.c1, mesh.dx), grad_backward(p.c2, mesh.dx)};
            };
            const double scale = wnorm(u) * wnorm(w) + 1e-30;

            // centered gradient is antisymmetric
            const double lhs1 = inner_macro(dc(u), w, s.eq, mesh);
            const double rhs1 = -inner_macro(u, dc(w), s.eq, mesh);
            worst = std::max(worst, std::abs(lhs1 - rhs1) / scale);

            // forward pairs with backward
            const double lhs2 = inner_macro(dp(u), w, s.eq, mesh);
            const double rhs2 = -inner_macro(u, dm(w), s.eq, mesh);
            worst = std::max(worst, std::abs(lhs2 - rhs2) / scale);

            // wide Laplacian (centered gradient applied twice) pairs with
            // the centered gradients
            const double lhs3 = 4.0 * inner_macro(dc(dc(u)), w, s.eq, mesh);
            const double rhs3 = -4.0 * inner_macro(dc(u), dc(w), s.eq, mesh);
            worst = std::max(worst, std::abs(lhs3 - rhs3) / scale);

            // dx ||D_c u|| <= ||u||
            const double lhs4 = mesh.dx * wnorm(dc(u));
            worst = std::max(worst, std::max(0.0, lhs4 - wnorm(u)) / (wnorm(u) + 1e-30));
        }
        suite.report("gradient_identities", worst <= 1e-12, worst,
                     "summation by parts on 100 random fields");
    }

    // Discrete Poincare inequality with the computed constant.
    {
        const double cp = s.consts.poincare;
        const double closed_form =
            mesh.dx / std::sin(std::numbers::pi / mesh.n_x);
        double worst = rel_err(cp, closed_form);
        bool ok = worst <= 1e-10;
        for (int trial = 0; trial < 100; ++trial) {
            SpatialPair u{random_zero_mean_field(mesh.n_x, rng),
                          random_zero_mean_field(mesh.n_x, rng)};
            const SpatialPair du{grad_centered(u.c1, mesh.dx), grad_centered(u.c2, mesh.dx)};
            const double lhs = norm_macro(u, s.eq, mesh);
            const double rhs = cp * norm_macro(du, s.eq, mesh);
            if (lhs > rhs * (1.0 + 1e-12)) {
                ok = false;
                worst = std::max(worst, lhs / rhs - 1.0);
            }
        }
        suite.report("poincare", ok, worst, "constant vs closed form, 100 random fields");
    }

    // Upwind flux equals its centered-plus-viscosity form to a couple ulp.
    {
        std::uniform_real_distribution<double> fdist(0.05, 2.0);
        std::uniform_real_distribution<double> ndist(-0.5, 0.5);
        std::uniform_real_distribution<double> vdist(-mesh.v_max, mesh.v_max);
        std::uniform_real_distribution<double> dvdist(0.05, 1.0);
        std::uint64_t worst = 0;
        for (int trial = 0; trial < 1000000; ++trial) {
            const double fl = fdist(rng);
            const double fr = fl * (1.0 + ndist(rng)); // neighboring-cell states
            const double v = vdist(rng);
            const double dv = dvdist(rng);
            const double a = upwind_flux(fl, fr, v, dv);
            const double b = upwind_flux_viscous_form(fl, fr, v, dv);
            worst = std::max(worst, ulp_distance(a, b));
        }
        suite.report("flux_equivalence", worst <= 2, static_cast<double>(worst),
                     "1e6 randomized inputs, max ulp distance");
    }

    // Monotonicity of the two-point flux map: nondecreasing in the left
    // state, nonincreasing in the right state.
    {
        std::uniform_real_distribution<double> fdist(0.0, 2.0);
        std::uniform_real_distribution<double> vdist(-mesh.v_max, mesh.v_max);
        bool ok = true;
        double worst = 0.0;
        const double h = 1e-6;
        for (int trial = 0; trial < 10000; ++trial) {
            const double fl = fdist(rng), fr = fdist(rng), v = vdist(rng);
            const double da = upwind_flux(fl + h, fr, v, 1.0) - upwind_flux(fl, fr, v, 1.0);
            const double db = upwind_flux(fl, fr + h, v, 1.0) - upwind_flux(fl, fr, v, 1.0);
            if (da < 0.0 || db > 0.0) {
                ok = false;
                worst = std::max({worst, -da, db});
            }
        }
        suite.report("flux_monotonicity", ok, worst, "finite differences on random states");
    }

    // Moment estimates with the computed constants.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const DistributionPair ft = random_deviation(mesh, rng);
            const MomentSet m = moments(ft, s.profiles, mesh);
            const DistributionPair pi = project_pi(ft, s.profiles, mesh);
            DistributionPair ortho = ft;
            for (std::size_t k = 0; k < ortho.f1.size(); ++k) ortho.f1[k] -= pi.f1[k];
            for (std::size_t k = 0; k < ortho.f2.size(); ++k) ortho.f2[k] -= pi.f2[k];
            const double n_pi = norm_micro(pi, s.eq, mesh);
            const double n_ortho = norm_micro(ortho, s.eq, mesh);
            const double n_full = norm_micro(ft, s.eq, mesh);

            const double rho_n = norm_macro({m.rho1, m.rho2}, s.eq, mesh);
            const double j_n = norm_macro({m.j1, m.j2}, s.eq, mesh);
            const double s_n = norm_macro({m.s1, m.s2}, s.eq, mesh);
            const double js_n = norm_macro({m.js1, m.js2}, s.eq, mesh);
            const double ss_n = norm_macro({m.ss1, m.ss2}, s.eq, mesh);

            worst = std::max(worst, rel_err(rho_n, n_pi)); // equality
            const double tol = 1e-12;
            worst = std::max(worst, std::max(0.0, j_n - s.consts.c1 * n_ortho * (1 + tol)));
            worst = std::max(worst, std::max(0.0, s_n - s.consts.c2 * n_ortho * (1 + tol)));
            worst = std::max(worst, std::max(0.0, js_n - s.consts.c1 * n_full * (1 + tol)));
            worst = std::max(worst, std::max(0.0, ss_n - s.consts.c3 * n_ortho * (1 + tol)));
        }
        suite.report("moment_estimates", worst <= 1e-12, worst,
                     "five bounds, 100 random states");
    }

    // Projection: idempotence, orthogonality, Pythagoras.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const DistributionPair f = random_state(mesh, rng);
            const DistributionPair dev = deviation(f, s.eq);
            const DistributionPair pi = project_pi(dev, s.profiles, mesh);
            const DistributionPair pipi = project_pi(pi, s.profiles, mesh);
            for (std::size_t k = 0; k < pi.f1.size(); ++k)
                worst = std::max(worst, std::abs(pi.f1[k] - pipi.f1[k]));
            DistributionPair ortho = dev;
            for (std::size_t k = 0; k < ortho.f1.size(); ++k) ortho.f1[k] -= pi.f1[k];
            for (std::size_t k = 0; k < ortho.f2.size(); ++k) ortho.f2[k] -= pi.f2[k];
            const double cross = inner_micro(pi, ortho, s.eq, mesh);
            const double nf2 = inner_micro(dev, dev, s.eq, mesh);
            worst = std::max(worst, std::abs(cross) / (nf2 + 1e-30));
            const double pyth = nf2 - (inner_micro(pi, pi, s.eq, mesh) +
                                       inner_micro(ortho, ortho, s.eq, mesh));
            worst = std::max(worst, std::abs(pyth) / (nf2 + 1e-30));
        }
        suite.report("projection", worst <= 1e-12, worst,
                     "idempotence, orthogonality, Pythagoras");
    }

    // Poisson solve: residual, gauge, self-adjointness, exact cosine mode.
    {
        const PoissonSolver poisson(mesh);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            SpatialPair rho{random_field(mesh.n_x, rng), random_field(mesh.n_x, rng)};
            const PoissonSolve sol = poisson.solve(rho);
            for (const auto& [phi, rhs, mean] :
                 {std::tuple{&sol.phi1, &rho.c1, sol.mean_removed1},
                  std::tuple{&sol.phi2, &rho.c2, sol.mean_removed2}}) {
                const std::vector<double> lap =
                    grad_centered(grad_centered(*phi, mesh.dx), mesh.dx);
                double res = 0.0, gauge = 0.0, scale = 0.0, phiscale = 0.0;
                for (int i = 0; i < mesh.n_x; ++i) {
                    const auto k = static_cast<std::size_t>(i);
                    res = std::max(res, std::abs(-lap[k] - ((*rhs)[k] - mean)));
                    gauge += mesh.dx * (*phi)[k];
                    scale = std::max(scale, std::abs((*rhs)[k]));
                    phiscale = std::max(phiscale, std::abs((*phi)[k]));
                }
                worst = std::max(worst, res / (1e-10 * std::max(scale, 1e-30)));
                worst = std::max(worst,
                                 std::abs(gauge) / (1e-12 * std::max(phiscale, 1e-30)));
            }
        }
        // exact eigenvector: rho = cos(2 pi x) -> phi = rho / lambda
        {
            SpatialPair rho;
            rho.c1.resize(static_cast<std::size_t>(mesh.n_x));
            rho.c2.assign(static_cast<std::size_t>(mesh.n_x), 0.0);
            for (int i = 0; i < mesh.n_x; ++i)
                rho.c1[static_cast<std::size_t>(i)] =
                    std::cos(2.0 * std::numbers::pi * mesh.x_center(i) / mesh.torus_length);
            const double lambda = std::pow(
                std::sin(2.0 * std::numbers::pi * mesh.dx / mesh.torus_length) / mesh.dx, 2);
            const PoissonSolve sol = poisson.solve(rho);
            double err = 0.0;
            for (int i = 0; i < mesh.n_x; ++i) {
                const auto k = static_cast<std::size_t>(i);
                err = std::max(err, std::abs(sol.phi1[k] - rho.c1[k] / lambda));
            }
            worst = std::max(worst, err / 1e-12);
        }
        suite.report("poisson", worst <= 1.0, worst,
                     "residual, gauge, cosine eigenmode (scaled to tolerance)");
    }

    // Equilibrium identities.
    {
        double worst = std::abs(s.eq.rho1_star * s.eq.rho2_star - 1.0);
        const double m0 = mass_difference(s.f0, mesh);
        const double relation =
            mesh.torus_length * (s.eq.rho_star - 1.0 / s.eq.rho_star) - m0;
        worst = std::max(worst, std::abs(relation) / std::max(1.0, std::abs(m0)));
        DistributionPair fstar = DistributionPair::zeros(mesh);
        for (int i = 0; i < mesh.n_x; ++i)
            for (int j = 0; j < mesh.n_v(); ++j) {
                fstar.at1(i, j) = s.eq.f1_star[static_cast<std::size_t>(j)];
                fstar.at2(i, j) = s.eq.f2_star[static_cast<std::size_t>(j)];
            }
        worst = std::max(worst, std::abs(boltzmann_entropy(fstar, s.eq, mesh)));
        worst = std::max(worst, std::abs(entropy_dissipation(fstar, s.profiles, mesh)));
        suite.report("equilibrium_identities", worst <= 1e-12, worst,
                     "rho1* rho2* = 1, defining relation, H(F*) = D(F*) = 0");
    }

    // Entropy sandwich and modified-entropy equivalence at the default delta.
    {
        const double delta = default_gamma_delta(s.consts);
        const double c_lo = s.consts.c_h - delta * s.consts.c1 * s.consts.poincare;
        const double c_hi = s.consts.big_c_h + delta * s.consts.c1 * s.consts.poincare;
        const PoissonSolver poisson(mesh);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const DistributionPair f =
                random_sandwich_state(mesh, s.profiles, cfg.rho_m, cfg.rho_M, rng);
            const DistributionPair dev = deviation(f, s.eq);
            const double n2 = inner_micro(dev, dev, s.eq, mesh);
            const double h = boltzmann_entropy(f, s.eq, mesh);
            worst = std::max(worst, (s.consts.c_h * n2 - h) / std::max(n2, 1e-30));
            worst = std::max(worst, (h - s.consts.big_c_h * n2) / std::max(n2, 1e-30));
            const ModifiedEntropy gamma = modified_entropy(f, {}, {}, s.eq, s.profiles, mesh,
                                                           poisson, delta, cfg.dt);
            worst = std::max(worst, (c_lo * n2 - gamma.gamma) / std::max(n2, 1e-30));
            worst = std::max(worst, (gamma.gamma - c_hi * n2) / std::max(n2, 1e-30));
        }
        suite.report("entropy_sandwich", worst <= 1e-12, worst,
                     "c_h ||Ft||^2 <= H <= C_H ||Ft||^2 and Gamma equivalence, 100 states");
    }

    // Clamp is the identity on compliant states.
    {
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const DistributionPair f =
                random_sandwich_state(mesh, s.profiles, cfg.rho_m, cfg.rho_M, rng);
            const DistributionPair clamped =
                clamp_to_sandwich(f, s.profiles, cfg.rho_m, cfg.rho_M);
            if (clamped.f1 != f.f1 || clamped.f2 != f.f2) ok = false;
        }
        suite.report("clamp_idempotent", ok, ok ? 0.0 : 1.0,
                     "clamp leaves compliant states bitwise unchanged");
    }

    // Parallel kernels agree with the serial reference implementations.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            const DistributionPair f = random_state(mesh, rng, 0.1, 1.5);
            const DistributionPair g = random_state(mesh, rng, 0.1, 1.5);
            worst = std::max(worst, rel_err(entropy_dissipation(f, s.profiles, mesh),
                                            ref::entropy_dissipation(f, s.profiles, mesh)));
            worst = std::max(worst, rel_err(boltzmann_entropy(f, s.eq, mesh),
                                            ref::boltzmann_entropy(f, s.eq, mesh)));
            worst = std::max(worst, rel_err(inner_micro(f, g, s.eq, mesh),
                                            ref::inner_micro(f, g, s.eq, mesh)));
            const SpatialPair a = densities(f, mesh);
            const SpatialPair b = ref::densities(f, mesh);
            for (std::size_t k = 0; k < a.c1.size(); ++k) {
                worst = std::max(worst, rel_err(a.c1[k], b.c1[k]));
                worst = std::max(worst, rel_err(a.c2[k], b.c2[k]));
            }
        }
        suite.report("kernel_consistency", worst <= 1e-13, worst,
                     "parallel kernels vs serial reference");
    }

    return suite.outcomes;
}

} // namespace kinreact
