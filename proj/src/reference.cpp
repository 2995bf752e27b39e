#include "kinreact/reference.hpp"

#include <cmath>

namespace kinreact::ref {

SpatialPair densities(const DistributionPair& f, const PhaseMesh& mesh) {
    SpatialPair rho;
    rho.c1.assign(static_cast<std::size_t>(mesh.n_x), 0.0);
    rho.c2.assign(static_cast<std::size_t>(mesh.n_x), 0.0);
    for (int i = 0; i < mesh.n_x; ++i) {
        double s1 = 0.0, s2 = 0.0;
        for (int j = 0; j < mesh.n_v(); ++j) {
            s1 += f.at1(i, j);
            s2 += f.at2(i, j);
        }
        rho.c1[static_cast<std::size_t>(i)] = mesh.dv * s1;
        rho.c2[static_cast<std::size_t>(i)] = mesh.dv * s2;
    }
    return rho;
}

MomentSet moments(const DistributionPair& f, const DiscreteProfiles& profiles,
                  const PhaseMesh& mesh) {
    MomentSet m;
    for (auto* v : {&m.rho1, &m.rho2, &m.j1, &m.j2, &m.s1, &m.s2, &m.js1, &m.js2, &m.ss1,
                    &m.ss2})
        v->assign(static_cast<std::size_t>(mesh.n_x), 0.0);
    for (int i = 0; i < mesh.n_x; ++i) {
        const auto k = static_cast<std::size_t>(i);
        for (int j = 0; j < mesh.n_v(); ++j) {
            const double v = mesh.v_centers[static_cast<std::size_t>(j)];
            const double x1 = f.at1(i, j), x2 = f.at2(i, j);
            m.rho1[k] += mesh.dv * x1;
            m.rho2[k] += mesh.dv * x2;
            m.j1[k] += mesh.dv * v * x1;
            m.j2[k] += mesh.dv * v * x2;
            m.s1[k] += mesh.dv * (v * v - profiles.d1) * x1;
            m.s2[k] += mesh.dv * (v * v - profiles.d2) * x2;
            m.js1[k] += mesh.dv * std::abs(v) * x1;
            m.js2[k] += mesh.dv * std::abs(v) * x2;
            m.ss1[k] += mesh.dv * v * std::abs(v) * x1;
            m.ss2[k] += mesh.dv * v * std::abs(v) * x2;
        }
    }
    return m;
}

double inner_micro(const DistributionPair& f, const DistributionPair& g,
                   const EquilibriumState& eq, const PhaseMesh& mesh) {
    double s = 0.0;
    for (int i = 0; i < mesh.n_x; ++i)
        for (int j = 0; j < mesh.n_v(); ++j) {
            const auto k = static_cast<std::size_t>(j);
            s += f.at1(i, j) * g.at1(i, j) / eq.f1_star[k];
            s += f.at2(i, j) * g.at2(i, j) / eq.f2_star[k];
        }
    return mesh.dx * mesh.dv * s;
}

double boltzmann_entropy(const DistributionPair& f, const EquilibriumState& eq,
                         const PhaseMesh& mesh) {
    double s = 0.0;
    for (int i = 0; i < mesh.n_x; ++i)
        for (int j = 0; j < mesh.n_v(); ++j) {
            const auto k = static_cast<std::size_t>(j);
            const double f1 = f.at1(i, j), e1 = eq.f1_star[k];
            const double f2 = f.at2(i, j), e2 = eq.f2_star[k];
            s += f1 * (std::log(f1 / e1) - 1.0) + e1;
            s += f2 * (std::log(f2 / e2) - 1.0) + e2;
        }
    return mesh.dx * mesh.dv * s;
}

double entropy_dissipation(const DistributionPair& f, const DiscreteProfiles& profiles,
                           const PhaseMesh& mesh) {
    double s = 0.0;
    for (int i = 0; i < mesh.n_x; ++i)
        for (int j = 0; j < mesh.n_v(); ++j)
            for (int m = 0; m < mesh.n_v(); ++m) {
                const double b = f.at1(i, j) * f.at2(i, m);
                const double a = profiles.chi1[static_cast<std::size_t>(j)] *
                                 profiles.chi2[static_cast<std::size_t>(m)];
                s += (b - a) * std::log(b / a);
            }
    return mesh.dx * mesh.dv * mesh.dv * s;
}

double mass_difference(const DistributionPair& f, const PhaseMesh& mesh) {
    double s = 0.0;
    for (int i = 0; i < mesh.n_x; ++i)
        for (int j = 0; j < mesh.n_v(); ++j) s += f.at1(i, j) - f.at2(i, j);
    return mesh.dx * mesh.dv * s;
}

} // namespace kinreact::ref
