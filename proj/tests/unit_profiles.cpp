#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kinreact/errors.hpp"
#include "kinreact/profiles.hpp"

using namespace kinreact;

namespace {

// Composite Simpson quadrature, used as the independent reference for the
// truncated-Gaussian second moment.
double simpson(double a, double b, int n, const std::function<double(double)>& f) {
    double s = f(a) + f(b);
    const double h = (b - a) / n;
    for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

void check_invariants(const std::vector<double>& chi, const PhaseMesh& mesh) {
    const ProfileMoments m = profile_moments(chi, mesh);
    CHECK(std::abs(m.mass - 1.0) <= 1e-14);
    CHECK(m.d > 0.0);
    CHECK(m.q >= 0.0);
    // zero in exact arithmetic; compensated summation leaves at most
    // second-order rounding residue
    CHECK(std::abs(m.first_moment) <= 1e-15);
    CHECK(std::abs(m.skew_moment) <= 1e-15);
    for (int a = 0; a < mesh.n_v(); ++a) {
        CHECK(chi[static_cast<std::size_t>(a)] > 0.0);
        // mirrored, not recomputed: bitwise equality
        CHECK(chi[static_cast<std::size_t>(a)] ==
              chi[static_cast<std::size_t>(mesh.mirror(a))]);
    }
}

} // namespace

TEST_CASE("uniform profile is already normalized") {
    const PhaseMesh mesh = build_mesh(3, 1.0, 4, 2.5);
    const double c = 1.0 / (2.0 * mesh.v_max);
    const std::vector<double> chi = discretize_profile([c](double) { return c; }, mesh);
    for (double x : chi) CHECK(x == doctest::Approx(c).epsilon(1e-15));
    check_invariants(chi, mesh);
}

TEST_CASE("truncated gaussian second moment vs quadrature") {
    const PhaseMesh mesh = build_mesh(3, 1.0, 16, 8.0);
    const std::vector<double> chi =
        discretize_profile([](double v) { return std::exp(-0.5 * v * v); }, mesh);
    check_invariants(chi, mesh);

    const ProfileMoments m = profile_moments(chi, mesh);
    const auto g = [](double v) { return std::exp(-0.5 * v * v); };
    const auto v2g = [&](double v) { return v * v * g(v); };
    const double d_quad = simpson(-8.0, 8.0, 4000, v2g) / simpson(-8.0, 8.0, 4000, g);
    // midpoint sampling is second order in dv
    CHECK(std::abs(m.d - d_quad) <= 5e-3);
    CHECK(std::abs(m.d - 1.0) <= 1e-2);
}

TEST_CASE("zero or negative samples are rejected") {
    const PhaseMesh mesh = build_mesh(3, 1.0, 2, 1.0);
    CHECK_THROWS_AS(discretize_profile([](double v) { return v < 0.5 ? 1.0 : 0.0; }, mesh),
                    NonPositiveProfile);
    CHECK_THROWS_AS(discretize_profile([](double) { return -1.0; }, mesh), NonPositiveProfile);
}

TEST_CASE("hand-evaluated moments on the two-cell grid") {
    const PhaseMesh mesh = build_mesh(3, 1.0, 1, 1.0);
    const std::vector<double> chi{0.5, 0.5}; // uniform 1/(2 v*)
    const ProfileMoments m = profile_moments(chi, mesh);
    CHECK(m.mass == 1.0);
    CHECK(m.first_moment == 0.0);
    CHECK(m.d == 0.25); // dv v^2 chi summed over two cells: 2 * 1 * 0.25 * 0.5
    CHECK(m.q == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(m.skew_moment == 0.0);
}

TEST_CASE("double-bump family") {
    const PhaseMesh mesh = build_mesh(3, 1.0, 24, 6.0);
    ProfileSpec spec;
    spec.family = ProfileSpec::Family::DoubleBump;
    spec.sigma = 0.7;
    spec.v0 = 2.0;
    const std::vector<double> chi = build_profile(spec, mesh);
    check_invariants(chi, mesh);
    // mass concentrates away from zero
    const double center = chi[static_cast<std::size_t>(mesh.n_v_half)];
    double peak = 0.0;
    for (double x : chi) peak = std::max(peak, x);
    CHECK(peak > 3.0 * center);
}

TEST_CASE("continuum tail mass diagnostic") {
    ProfileSpec uniform;
    uniform.family = ProfileSpec::Family::Uniform;
    CHECK(continuum_tail_mass(uniform, 3.0) == 0.0);

    ProfileSpec gauss;
    gauss.family = ProfileSpec::Family::Gaussian;
    gauss.sigma = 1.0;
    CHECK(continuum_tail_mass(gauss, 6.0) ==
          doctest::Approx(std::erfc(6.0 / std::sqrt(2.0))).epsilon(1e-12));
    CHECK(continuum_tail_mass(gauss, 1.0) > continuum_tail_mass(gauss, 2.0));
}

TEST_CASE("raw profile table loader") {
    const PhaseMesh mesh = build_mesh(3, 1.0, 2, 1.0);
    const char* path = "profile_table_test.txt";
    {
        std::ofstream out(path);
        out << "0.1\n0.4\n0.4\n0.1\n";
    }
    const std::vector<double> chi = load_profile_table(path, mesh);
    check_invariants(chi, mesh);

    {
        // asymmetric input is symmetrized by averaging mirror pairs
        std::ofstream out(path);
        out << "0.1\n0.3\n0.5\n0.1\n";
    }
    const std::vector<double> chi2 = load_profile_table(path, mesh);
    check_invariants(chi2, mesh);
    CHECK(chi2[1] == chi2[2]);

    {
        std::ofstream out(path);
        out << "0.1\n0.4\n0.4\n"; // wrong length
    }
    CHECK_THROWS_AS(load_profile_table(path, mesh), ParseError);

    {
        std::ofstream out(path);
        out << "-0.1\n0.4\n0.4\n-0.1\n";
    }
    CHECK_THROWS_AS(load_profile_table(path, mesh), NonPositiveProfile);
    std::remove(path);
}
