#pragma once

#include <span>
#include <vector>

#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"

namespace kinreact {

/// The discrete unknown F = (f1, f2) at one time level. Cell-averaged
/// phase-space densities, spatial index outermost, velocity innermost.
struct DistributionPair {
    int n_x = 0;
    int n_v = 0;
    std::vector<double> f1, f2;

    static DistributionPair zeros(const PhaseMesh& mesh) {
        DistributionPair f;
        f.n_x = mesh.n_x;
        f.n_v = mesh.n_v();
        f.f1.assign(static_cast<std::size_t>(f.n_x) * f.n_v, 0.0);
        f.f2.assign(static_cast<std::size_t>(f.n_x) * f.n_v, 0.0);
        return f;
    }

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_v) +
               static_cast<std::size_t>(j);
    }
    double& at1(int i, int j) { return f1[idx(i, j)]; }
    double& at2(int i, int j) { return f2[idx(i, j)]; }
    double at1(int i, int j) const { return f1[idx(i, j)]; }
    double at2(int i, int j) const { return f2[idx(i, j)]; }
};

/// Equilibrium of the scheme: spatially uniform, rho1* rho2* = 1, with
/// f_k* = rho_k* chi_k stored per velocity cell.
struct EquilibriumState {
    double rho_star = 1.0;  // rho^{infty,*}
    double rho1_star = 1.0; // = rho_star
    double rho2_star = 1.0; // = 1 / rho_star
    std::vector<double> f1_star, f2_star; // length 2L
};

/// A pair of per-cell spatial fields, one component per species.
struct SpatialPair {
    std::vector<double> c1, c2;
};

/// Densities, first moments, centered second moments and the skewed moments
/// that enter the discrete moment equations through the upwind viscosity.
struct MomentSet {
    std::vector<double> rho1, rho2; // sum dv f
    std::vector<double> j1, j2;     // sum dv v f
    std::vector<double> s1, s2;     // sum dv (v^2 - D_k) f
    std::vector<double> js1, js2;   // sum dv |v| f
    std::vector<double> ss1, ss2;   // sum dv v|v| f
};

SpatialPair densities(const DistributionPair& f, const PhaseMesh& mesh);
MomentSet moments(const DistributionPair& f, const DiscreteProfiles& profiles,
                  const PhaseMesh& mesh);

/// (Pi F)_{ij} = (rho_{1,i} chi_{1,j}, rho_{2,i} chi_{2,j}).
DistributionPair project_pi(const DistributionPair& f, const DiscreteProfiles& profiles,
                            const PhaseMesh& mesh);

/// F - F^{infty,*}.
DistributionPair deviation(const DistributionPair& f, const EquilibriumState& eq);

/// Weighted L2 scalar product over phase space:
/// sum dx dv (f1 g1 / f1* + f2 g2 / f2*).
double inner_micro(const DistributionPair& f, const DistributionPair& g,
                   const EquilibriumState& eq, const PhaseMesh& mesh);
double norm_micro(const DistributionPair& f, const EquilibriumState& eq,
                  const PhaseMesh& mesh);

/// Weighted scalar product in position:
/// sum dx (u1 w1 / rho1* + u2 w2 / rho2*).
double inner_macro(const SpatialPair& u, const SpatialPair& w,
                   const EquilibriumState& eq, const PhaseMesh& mesh);
double norm_macro(const SpatialPair& u, const EquilibriumState& eq, const PhaseMesh& mesh);

/// Unweighted torus L2 norm sqrt(sum dx u^2).
double l2_torus(std::span<const double> u, const PhaseMesh& mesh);

// Periodic discrete gradients on spatial fields.
std::vector<double> grad_centered(std::span<const double> u, double dx);
std::vector<double> grad_forward(std::span<const double> u, double dx);
std::vector<double> grad_backward(std::span<const double> u, double dx);
/// Three-point Laplacian D+ D- = D- D+.
std::vector<double> laplace_3pt(std::span<const double> u, double dx);

/// sum dx dv (f1 - f2): the conserved quantity of the scheme.
double mass_difference(const DistributionPair& f, const PhaseMesh& mesh);

double sup_norm(const DistributionPair& f);
bool all_finite(const DistributionPair& f);

} // namespace kinreact
