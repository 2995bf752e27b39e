#pragma once

#include <cstdlib>
#include <random>
#include <vector>

#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"
#include "kinreact/state.hpp"

namespace kinreact::testing {

// Random-data generators shared by the property-test suite and the verify
// subcommand. Seeded from the SEED environment variable when present.

inline std::uint64_t seed_from_env(std::uint64_t fallback = 12345) {
    if (const char* s = std::getenv("SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    return fallback;
}

inline std::vector<double> random_field(int n, std::mt19937_64& rng, double lo = -1.0,
                                        double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (double& x : u) x = dist(rng);
    return u;
}

inline std::vector<double> random_zero_mean_field(int n, std::mt19937_64& rng) {
    std::vector<double> u = random_field(n, rng);
    double mean = 0.0;
    for (double x : u) mean += x;
    mean /= n;
    for (double& x : u) x -= mean;
    return u;
}

inline SpatialPair random_spatial_pair(int n, std::mt19937_64& rng) {
    return {random_field(n, rng), random_field(n, rng)};
}

/// Arbitrary two-species field, entries in (lo, hi) per cell.
inline DistributionPair random_state(const PhaseMesh& mesh, std::mt19937_64& rng,
                                     double lo = 0.05, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    DistributionPair f = DistributionPair::zeros(mesh);
    for (double& x : f.f1) x = dist(rng);
    for (double& x : f.f2) x = dist(rng);
    return f;
}

/// Signed random deviation field (not a physical state).
inline DistributionPair random_deviation(const PhaseMesh& mesh, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DistributionPair f = DistributionPair::zeros(mesh);
    for (double& x : f.f1) x = dist(rng);
    for (double& x : f.f2) x = dist(rng);
    return f;
}

/// State inside the sandwich: f1 in [rho_m chi1, rho_M chi1] and
/// f2 in [rho_M^-1 chi2, rho_m^-1 chi2], cellwise uniform.
inline DistributionPair random_sandwich_state(const PhaseMesh& mesh,
                                              const DiscreteProfiles& profiles,
                                              double rho_m, double rho_M,
                                              std::mt19937_64& rng) {
    std::uniform_real_distribution<double> r1(rho_m, rho_M);
    std::uniform_real_distribution<double> r2(1.0 / rho_M, 1.0 / rho_m);
    DistributionPair f = DistributionPair::zeros(mesh);
    for (int i = 0; i < mesh.n_x; ++i)
        for (int j = 0; j < mesh.n_v(); ++j) {
            const auto k = static_cast<std::size_t>(j);
            f.at1(i, j) = r1(rng) * profiles.chi1[k];
            f.at2(i, j) = r2(rng) * profiles.chi2[k];
        }
    return f;
}

} // namespace kinreact::testing
