#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kinreact/diagnostics.hpp"
#include "kinreact/errors.hpp"
#include "kinreact/reference.hpp"
#include "kinreact/testing.hpp"

using namespace kinreact;
using namespace kinreact::testing;

namespace {

struct Fixture {
    PhaseMesh mesh;
    DiscreteProfiles profiles;
    EquilibriumState eq;
    SchemeParams params;

    Fixture(int n_x = 7, int l = 4, double rho_star = 1.0) {
        mesh = build_mesh(n_x, 1.0, l, 4.0);
        ProfileSpec gauss;
        profiles = make_profiles(build_profile(gauss, mesh), build_profile(gauss, mesh), mesh);
        eq = equilibrium_from_initial(state(rho_star, 1.0 / rho_star), profiles, mesh);
        params.dt = 0.05;
        params.rho_m = 0.5;
        params.rho_M = 2.0;
    }

    DistributionPair state(double r1, double r2) const {
        DistributionPair f = DistributionPair::zeros(mesh);
        for (int i = 0; i < mesh.n_x; ++i)
            for (int j = 0; j < mesh.n_v(); ++j) {
                f.at1(i, j) = r1 * profiles.chi1[static_cast<std::size_t>(j)];
                f.at2(i, j) = r2 * profiles.chi2[static_cast<std::size_t>(j)];
            }
        return f;
    }

    DistributionPair equilibrium_state() const {
        return state(eq.rho1_star, eq.rho2_star);
    }
};

double rel(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

} // namespace

TEST_CASE("theoretical constants, hand-evaluated at rho* = 1") {
    const Fixture fx;
    const TheoreticalConstants c =
        theoretical_constants(fx.profiles, fx.eq, 0.5, 2.0, 1.0 / 3.0);
    CHECK(c.c_h == doctest::Approx(0.25)); // min(1/2, 0.5) / 2
    CHECK(c.big_c_h == doctest::Approx(1.0)); // max(2, 2) / 2
    CHECK(c.c4 == doctest::Approx(0.0625)); // (1/4) c_h
    CHECK(c.c5 == doctest::Approx(0.25));
    CHECK(c.c6 == doctest::Approx(0.25 * 0.5 * 0.25)); // (1/4)(1/2) min(1/2,1/2)^2
    CHECK(c.c7 == doctest::Approx(std::sqrt(2.0) / 3.0));
    CHECK(c.c8 == doctest::Approx(8.0));
    CHECK(c.c1 == doctest::Approx(std::sqrt(std::max(fx.profiles.d1, fx.profiles.d2))));
    CHECK(default_gamma_delta(c) == doctest::Approx(0.5 * 0.25 / (c.c1 / 3.0)));
    CHECK(c.c1 > 0.0);
    CHECK(c.c2 > 0.0);
    CHECK(c.c3 > 0.0);
}

TEST_CASE("relative entropy vanishes at equilibrium and doubles as expected") {
    const Fixture fx(7, 4, 1.4);
    CHECK(std::abs(boltzmann_entropy(fx.equilibrium_state(), fx.eq, fx.mesh)) <= 1e-16);

    // f = 2 f*: closed form |T| (rho1* + rho2*) (2 log 2 - 1)
    const DistributionPair doubled =
        fx.state(2.0 * fx.eq.rho1_star, 2.0 * fx.eq.rho2_star);
    const double expected = fx.mesh.torus_length * (fx.eq.rho1_star + fx.eq.rho2_star) *
                            (2.0 * std::log(2.0) - 1.0);
    CHECK(rel(boltzmann_entropy(doubled, fx.eq, fx.mesh), expected) <= 1e-13);

    std::mt19937_64 rng(seed_from_env());
    for (int trial = 0; trial < 20; ++trial) {
        const DistributionPair f = random_state(fx.mesh, rng, 0.05, 2.0);
        CHECK(boltzmann_entropy(f, fx.eq, fx.mesh) >= 0.0);
    }

    DistributionPair bad = fx.equilibrium_state();
    bad.f1[0] = 0.0;
    CHECK_THROWS_AS(boltzmann_entropy(bad, fx.eq, fx.mesh), NonPositiveState);
    CHECK_THROWS_AS(entropy_dissipation(bad, fx.profiles, fx.mesh), NonPositiveState);
}

TEST_CASE("entropy sandwich on sandwich-compliant states") {
    const Fixture fx;
    const TheoreticalConstants c =
        theoretical_constants(fx.profiles, fx.eq, 0.5, 2.0, poincare_constant(fx.mesh));
    std::mt19937_64 rng(seed_from_env());
    for (int trial = 0; trial < 50; ++trial) {
        const DistributionPair f = random_sandwich_state(fx.mesh, fx.profiles, 0.5, 2.0, rng);
        const DistributionPair dev = deviation(f, fx.eq);
        const double n2 = inner_micro(dev, dev, fx.eq, fx.mesh);
        const double h = boltzmann_entropy(f, fx.eq, fx.mesh);
        CHECK(h >= c.c_h * n2 * (1 - 1e-12));
        CHECK(h <= c.big_c_h * n2 * (1 + 1e-12));
    }
}

TEST_CASE("dissipation vanishes on every equilibrium and matches the naive loop") {
    const Fixture unit;
    CHECK(std::abs(entropy_dissipation(unit.state(1.0, 1.0), unit.profiles, unit.mesh)) <=
          1e-18);

    // rho* != 1: f1 f2' = rho1* rho2* chi1 chi2' = chi1 chi2' still
    const Fixture skew(7, 4, 1.5);
    CHECK(std::abs(entropy_dissipation(skew.equilibrium_state(), skew.profiles, skew.mesh)) <=
          1e-16);

    const Fixture small(3, 2);
    std::mt19937_64 rng(seed_from_env());
    for (int trial = 0; trial < 20; ++trial) {
        const DistributionPair f = random_state(small.mesh, rng, 0.05, 1.5);
        const double d = entropy_dissipation(f, small.profiles, small.mesh);
        CHECK(d >= 0.0);
        CHECK(rel(d, ref::entropy_dissipation(f, small.profiles, small.mesh)) <= 1e-13);
    }
}

TEST_CASE("modified entropy") {
    const Fixture fx;
    const PoissonSolver poisson(fx.mesh);
    std::mt19937_64 rng(seed_from_env());

    SUBCASE("delta = 0 reduces to the relative entropy") {
        const DistributionPair f = random_sandwich_state(fx.mesh, fx.profiles, 0.5, 2.0, rng);
        const ModifiedEntropy g =
            modified_entropy(f, {}, {}, fx.eq, fx.profiles, fx.mesh, poisson, 0.0, 0.05);
        CHECK(g.gamma == doctest::Approx(boltzmann_entropy(f, fx.eq, fx.mesh)).epsilon(1e-15));
    }

    SUBCASE("zero at equilibrium") {
        const ModifiedEntropy g = modified_entropy(fx.equilibrium_state(), {}, {}, fx.eq,
                                                   fx.profiles, fx.mesh, poisson, 0.3, 0.05);
        CHECK(std::abs(g.gamma) <= 1e-14);
        for (double x : g.grad_phi1) CHECK(std::abs(x) <= 1e-12);
    }

    SUBCASE("equivalence sandwich at the default delta") {
        const TheoreticalConstants c =
            theoretical_constants(fx.profiles, fx.eq, 0.5, 2.0, poincare_constant(fx.mesh));
        const double delta = default_gamma_delta(c);
        const double c_lo = c.c_h - delta * c.c1 * c.poincare;
        const double c_hi = c.big_c_h + delta * c.c1 * c.poincare;
        CHECK(c_lo > 0.0);
        for (int trial = 0; trial < 30; ++trial) {
            const DistributionPair f =
                random_sandwich_state(fx.mesh, fx.profiles, 0.5, 2.0, rng);
            const DistributionPair dev = deviation(f, fx.eq);
            const double n2 = inner_micro(dev, dev, fx.eq, fx.mesh);
            const ModifiedEntropy g = modified_entropy(f, {}, {}, fx.eq, fx.profiles, fx.mesh,
                                                       poisson, delta, 0.05);
            CHECK(g.increment_term == 0.0); // first evaluation
            CHECK(g.gamma >= c_lo * n2 * (1 - 1e-12));
            CHECK(g.gamma <= c_hi * n2 * (1 + 1e-12));
        }
    }

    SUBCASE("increment term uses the previous potential") {
        const DistributionPair f = random_sandwich_state(fx.mesh, fx.profiles, 0.5, 2.0, rng);
        const ModifiedEntropy first =
            modified_entropy(f, {}, {}, fx.eq, fx.profiles, fx.mesh, poisson, 0.2, 0.05);
        const DistributionPair g2 = random_sandwich_state(fx.mesh, fx.profiles, 0.5, 2.0, rng);
        const ModifiedEntropy second =
            modified_entropy(g2, first.grad_phi1, first.grad_phi2, fx.eq, fx.profiles,
                             fx.mesh, poisson, 0.2, 0.05);
        CHECK(second.increment_term >= 0.0);
        // same state twice: increment vanishes
        const ModifiedEntropy same = modified_entropy(
            f, first.grad_phi1, first.grad_phi2, fx.eq, fx.profiles, fx.mesh, poisson, 0.2, 0.05);
        CHECK(same.increment_term <= 1e-20);
    }
}

TEST_CASE("step inequalities hold along implicit steps") {
    const Fixture fx(9, 6);
    const PoissonSolver poisson(fx.mesh);
    const TheoreticalConstants consts =
        theoretical_constants(fx.profiles, fx.eq, 0.5, 2.0, poincare_constant(fx.mesh));
    std::mt19937_64 rng(seed_from_env());

    SUBCASE("equilibrium to equilibrium: both sides vanish") {
        const DistributionPair f0 = fx.equilibrium_state();
        const auto [f1, report] = implicit_step(f0, fx.profiles, fx.mesh, fx.params);
        StepCheckInput in;
        in.f_n = &f0;
        in.f_np1 = &f1;
        in.entropy_n = boltzmann_entropy(f0, fx.eq, fx.mesh);
        in.entropy_np1 = boltzmann_entropy(f1, fx.eq, fx.mesh);
        in.dissipation_np1 = entropy_dissipation(f1, fx.profiles, fx.mesh);
        const ModifiedEntropy g0 =
            modified_entropy(f0, {}, {}, fx.eq, fx.profiles, fx.mesh, poisson, 0.0, fx.params.dt);
        const ModifiedEntropy g1 =
            modified_entropy(f1, {}, {}, fx.eq, fx.profiles, fx.mesh, poisson, 0.0, fx.params.dt);
        in.grad_phi1_n = g0.grad_phi1;
        in.grad_phi2_n = g0.grad_phi2;
        in.grad_phi1_np1 = g1.grad_phi1;
        in.grad_phi2_np1 = g1.grad_phi2;
        const auto checks =
            check_step_inequalities(in, consts, fx.params, fx.eq, fx.profiles, fx.mesh);
        CHECK(checks.size() == 6);
        for (const auto& c : checks) CHECK(c.pass);
    }

    SUBCASE("generic sandwich-compliant trajectory") {
        DistributionPair f = random_sandwich_state(fx.mesh, fx.profiles, 0.5, 2.0, rng);
        // the equilibrium of this trajectory's own conserved mass difference
        const EquilibriumState eq = equilibrium_from_initial(f, fx.profiles, fx.mesh);
        const TheoreticalConstants cs =
            theoretical_constants(fx.profiles, eq, 0.5, 2.0, poincare_constant(fx.mesh));
        double prev_entropy = boltzmann_entropy(f, eq, fx.mesh);
        ModifiedEntropy prev_gamma =
            modified_entropy(f, {}, {}, eq, fx.profiles, fx.mesh, poisson, 0.0, fx.params.dt);
        for (int n = 0; n < 10; ++n) {
            const auto [next, report] = implicit_step(f, fx.profiles, fx.mesh, fx.params);
            const ModifiedEntropy g = modified_entropy(next, prev_gamma.grad_phi1,
                                                       prev_gamma.grad_phi2, eq, fx.profiles,
                                                       fx.mesh, poisson, 0.0, fx.params.dt);
            StepCheckInput in;
            in.f_n = &f;
            in.f_np1 = &next;
            in.entropy_n = prev_entropy;
            in.entropy_np1 = boltzmann_entropy(next, eq, fx.mesh);
            in.dissipation_np1 = entropy_dissipation(next, fx.profiles, fx.mesh);
            in.grad_phi1_n = prev_gamma.grad_phi1;
            in.grad_phi2_n = prev_gamma.grad_phi2;
            in.grad_phi1_np1 = g.grad_phi1;
            in.grad_phi2_np1 = g.grad_phi2;
            const auto checks =
                check_step_inequalities(in, cs, fx.params, eq, fx.profiles, fx.mesh);
            for (const auto& c : checks) {
                INFO(c.name, " margin ", c.margin);
                CHECK(c.pass);
            }
            // entropy is nonincreasing
            CHECK(in.entropy_np1 <= prev_entropy + 1e-9 * std::max(1.0, prev_entropy));
            prev_entropy = in.entropy_np1;
            prev_gamma = g;
            f = next;
        }
    }
}

TEST_CASE("decay rate fitting") {
    SUBCASE("synthetic exact exponential") {
        std::vector<double> t, y;
        for (int k = 0; k < 50; ++k) {
            t.push_back(0.1 * k);
            y.push_back(3.0 * std::exp(-2.0 * 0.1 * k));
        }
        const DecayFit fit = fit_decay_rate(t, y, 0, t.size());
        CHECK(fit.kappa == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("constant series") {
        std::vector<double> t, y;
        for (int k = 0; k < 10; ++k) {
            t.push_back(0.5 * k);
            y.push_back(4.0);
        }
        const DecayFit fit = fit_decay_rate(t, y, 0, t.size());
        CHECK(fit.kappa == doctest::Approx(0.0));
        CHECK(fit.r_squared == doctest::Approx(1.0));
    }

    SUBCASE("error paths") {
        std::vector<double> t{0, 1, 2, 3}, y{1, 1, 1, 1};
        CHECK_THROWS_AS(fit_decay_rate(t, y, 0, t.size()), WindowTooShort);
        std::vector<double> t5{0, 1, 2, 3, 4}, y5{1, 1, -1, 1, 1};
        CHECK_THROWS_AS(fit_decay_rate(t5, y5, 0, t5.size()), NonPositiveSeries);
    }
}

TEST_CASE("pythagoras for the projection split") {
    const Fixture fx;
    std::mt19937_64 rng(seed_from_env());
    for (int trial = 0; trial < 20; ++trial) {
        const DistributionPair f = random_state(fx.mesh, rng);
        const DistributionPair dev = deviation(f, fx.eq);
        const DistributionPair pi = project_pi(dev, fx.profiles, fx.mesh);
        DistributionPair ortho = dev;
        for (std::size_t k = 0; k < ortho.f1.size(); ++k) ortho.f1[k] -= pi.f1[k];
        for (std::size_t k = 0; k < ortho.f2.size(); ++k) ortho.f2[k] -= pi.f2[k];
        const double a = inner_micro(dev, dev, fx.eq, fx.mesh);
        const double b = inner_micro(pi, pi, fx.eq, fx.mesh) +
                         inner_micro(ortho, ortho, fx.eq, fx.mesh);
        CHECK(rel(a, b) <= 1e-12);
    }
}
