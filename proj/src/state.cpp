#include "kinreact/state.hpp"

#include <cmath>

#include "kinreact/reduce.hpp"

namespace kinreact {

SpatialPair densities(const DistributionPair& f, const PhaseMesh& mesh) {
    const int n_x = mesh.n_x, n_v = mesh.n_v();
    SpatialPair rho;
    rho.c1.resize(static_cast<std::size_t>(n_x));
    rho.c2.resize(static_cast<std::size_t>(n_x));
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_x; ++i) {
        Accumulator a1, a2;
        for (int j = 0; j < n_v; ++j) {
            a1.add(f.at1(i, j));
            a2.add(f.at2(i, j));
        }
        rho.c1[static_cast<std::size_t>(i)] = mesh.dv * a1.value();
        rho.c2[static_cast<std::size_t>(i)] = mesh.dv * a2.value();
    }
    return rho;
}

MomentSet moments(const DistributionPair& f, const DiscreteProfiles& profiles,
                  const PhaseMesh& mesh) {
    const int n_x = mesh.n_x, n_v = mesh.n_v();
    MomentSet m;
    for (auto* v : {&m.rho1, &m.rho2, &m.j1, &m.j2, &m.s1, &m.s2, &m.js1, &m.js2, &m.ss1,
                    &m.ss2})
        v->resize(static_cast<std::size_t>(n_x));

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_x; ++i) {
        Accumulator rho1, rho2, j1, j2, s1, s2, js1, js2, ss1, ss2;
        for (int j = 0; j < n_v; ++j) {
            const double v = mesh.v_centers[static_cast<std::size_t>(j)];
            const double av = std::abs(v);
            const double x1 = f.at1(i, j);
            const double x2 = f.at2(i, j);
            rho1.add(x1);
            rho2.add(x2);
            j1.add(v * x1);
            j2.add(v * x2);
            s1.add((v * v - profiles.d1) * x1);
            s2.add((v * v - profiles.d2) * x2);
            js1.add(av * x1);
            js2.add(av * x2);
            ss1.add(v * av * x1);
            ss2.add(v * av * x2);
        }
        const auto k = static_cast<std::size_t>(i);
        m.rho1[k] = mesh.dv * rho1.value();
        m.rho2[k] = mesh.dv * rho2.value();
        m.j1[k] = mesh.dv * j1.value();
        m.j2[k] = mesh.dv * j2.value();
        m.s1[k] = mesh.dv * s1.value();
        m.s2[k] = mesh.dv * s2.value();
        m.js1[k] = mesh.dv * js1.value();
        m.js2[k] = mesh.dv * js2.value();
        m.ss1[k] = mesh.dv * ss1.value();
        m.ss2[k] = mesh.dv * ss2.value();
    }
    return m;
}

DistributionPair project_pi(const DistributionPair& f, const DiscreteProfiles& profiles,
                            const PhaseMesh& mesh) {
    const SpatialPair rho = densities(f, mesh);
    DistributionPair out = DistributionPair::zeros(mesh);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < mesh.n_x; ++i)
        for (int j = 0; j < mesh.n_v(); ++j) {
            out.at1(i, j) = rho.c1[static_cast<std::size_t>(i)] *
                            profiles.chi1[static_cast<std::size_t>(j)];
            out.at2(i, j) = rho.c2[static_cast<std::size_t>(i)] *
                            profiles.chi2[static_cast<std::size_t>(j)];
        }
    return out;
}

DistributionPair deviation(const DistributionPair& f, const EquilibriumState& eq) {
    DistributionPair out = f;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < f.n_x; ++i)
        for (int j = 0; j < f.n_v; ++j) {
            out.at1(i, j) -= eq.f1_star[static_cast<std::size_t>(j)];
            out.at2(i, j) -= eq.f2_star[static_cast<std::size_t>(j)];
        }
    return out;
}

double inner_micro(const DistributionPair& f, const DistributionPair& g,
                   const EquilibriumState& eq, const PhaseMesh& mesh) {
    const int n_v = mesh.n_v();
    const double w = mesh.dx * mesh.dv;
    return w * reduce_rows(mesh.n_x, [&](int i) {
               Accumulator acc;
               for (int j = 0; j < n_v; ++j) {
                   const auto k = static_cast<std::size_t>(j);
                   acc.add(f.at1(i, j) * g.at1(i, j) / eq.f1_star[k]);
                   acc.add(f.at2(i, j) * g.at2(i, j) / eq.f2_star[k]);
               }
               return acc.value();
           });
}

double norm_micro(const DistributionPair& f, const EquilibriumState& eq,
                  const PhaseMesh& mesh) {
    return std::sqrt(std::max(0.0, inner_micro(f, f, eq, mesh)));
}

double inner_macro(const SpatialPair& u, const SpatialPair& w, const EquilibriumState& eq,
                   const PhaseMesh& mesh) {
    Accumulator acc;
    for (int i = 0; i < mesh.n_x; ++i) {
        const auto k = static_cast<std::size_t>(i);
        acc.add(u.c1[k] * w.c1[k] / eq.rho1_star);
        acc.add(u.c2[k] * w.c2[k] / eq.rho2_star);
    }
    return mesh.dx * acc.value();
}

double norm_macro(const SpatialPair& u, const EquilibriumState& eq, const PhaseMesh& mesh) {
    return std::sqrt(std::max(0.0, inner_macro(u, u, eq, mesh)));
}

double l2_torus(std::span<const double> u, const PhaseMesh& mesh) {
    Accumulator acc;
    for (double x : u) acc.add(x * x);
    return std::sqrt(std::max(0.0, mesh.dx * acc.value()));
}

std::vector<double> grad_centered(std::span<const double> u, double dx) {
    const int n = static_cast<int>(u.size());
    std::vector<double> g(u.size());
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        const int im = (i == 0) ? n - 1 : i - 1;
        g[static_cast<std::size_t>(i)] =
            (u[static_cast<std::size_t>(ip)] - u[static_cast<std::size_t>(im)]) / (2.0 * dx);
    }
    return g;
}

std::vector<double> grad_forward(std::span<const double> u, double dx) {
    const int n = static_cast<int>(u.size());
    std::vector<double> g(u.size());
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        g[static_cast<std::size_t>(i)] =
            (u[static_cast<std::size_t>(ip)] - u[static_cast<std::size_t>(i)]) / dx;
    }
    return g;
}

std::vector<double> grad_backward(std::span<const double> u, double dx) {
    const int n = static_cast<int>(u.size());
    std::vector<double> g(u.size());
    for (int i = 0; i < n; ++i) {
        const int im = (i == 0) ? n - 1 : i - 1;
        g[static_cast<std::size_t>(i)] =
            (u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(im)]) / dx;
    }
    return g;
}

std::vector<double> laplace_3pt(std::span<const double> u, double dx) {
    const int n = static_cast<int>(u.size());
    std::vector<double> g(u.size());
    for (int i = 0; i < n; ++i) {
        const int ip = (i + 1 == n) ? 0 : i + 1;
        const int im = (i == 0) ? n - 1 : i - 1;
        g[static_cast<std::size_t>(i)] =
            (u[static_cast<std::size_t>(ip)] - 2.0 * u[static_cast<std::size_t>(i)] +
             u[static_cast<std::size_t>(im)]) /
            (dx * dx);
    }
    return g;
}

double mass_difference(const DistributionPair& f, const PhaseMesh& mesh) {
    const int n_v = mesh.n_v();
    return mesh.dx * mesh.dv * reduce_rows(mesh.n_x, [&](int i) {
               Accumulator acc;
               for (int j = 0; j < n_v; ++j) acc.add(f.at1(i, j) - f.at2(i, j));
               return acc.value();
           });
}

double sup_norm(const DistributionPair& f) {
    return std::max(sup_abs(f.f1), sup_abs(f.f2));
}

bool all_finite(const DistributionPair& f) {
    for (double x : f.f1)
        if (!std::isfinite(x)) return false;
    for (double x : f.f2)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace kinreact
