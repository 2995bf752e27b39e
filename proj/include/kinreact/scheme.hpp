#pragma once

#include <span>
#include <utility>

#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"
#include "kinreact/state.hpp"

namespace kinreact {

struct SchemeParams {
    double dt = 0.0;
    // Sandwich constants declared for the initial data:
    // rho_m chi_1 <= f1 <= rho_M chi_1 and rho_M^-1 chi_2 <= f2 <= rho_m^-1 chi_2.
    double rho_m = 0.0;
    double rho_M = 0.0;
    double picard_tol = 1e-12;  // relative sup-norm stopping tolerance
    int picard_max_iter = 200;
    bool enforce_bounds = true; // reject input states violating the sandwich
};

struct StepReport {
    int picard_iterations = 0;
    double residual = 0.0;          // final relative sup-norm increment
    bool truncation_active = false; // clamp still moves the accepted state
    double bounds_violation = 0.0;  // largest signed sandwich violation; <= 0 means none
};

/// The unique positive root of |T|(rho - 1/rho) = M0, where M0 is the
/// conserved mass difference of the input data, together with the
/// equilibrium distributions f_k* = rho_k* chi_k.
EquilibriumState equilibrium_from_initial(const DistributionPair& f_in,
                                          const DiscreteProfiles& profiles,
                                          const PhaseMesh& mesh);

/// Upwind two-point flux dv (v^+ f_left + v^- f_right).
double upwind_flux(double f_left, double f_right, double v, double dv);

/// The same flux written as centered transport plus |v|/2 numerical
/// viscosity: dv (v (f_left+f_right)/2 - (|v|/2)(f_right-f_left)).
/// Agrees with upwind_flux to a couple of ulp.
double upwind_flux_viscous_form(double f_left, double f_right, double v, double dv);

/// Componentwise clamp onto the sandwich; identity on compliant states.
DistributionPair clamp_to_sandwich(const DistributionPair& f, const DiscreteProfiles& profiles,
                                   double rho_m, double rho_M);

/// Largest signed amount by which f1 leaves [rho_m chi_1, rho_M chi_1] or f2
/// leaves [rho_M^-1 chi_2, rho_m^-1 chi_2]; <= 0 means the maximum principle
/// holds.
double check_maximum_principle(const DistributionPair& f, const DiscreteProfiles& profiles,
                               const SchemeParams& params);

/// Solve the cyclic two-diagonal system
///   diag[i] x[i] - off x[(i + neighbor) mod n] = rhs[i]
/// with neighbor in {-1, +1}, by forward (resp. backward) substitution plus
/// the rank-one periodic closure. Requires diag[i] > off >= 0 (diagonal
/// dominance); throws SingularTransportSolve otherwise.
void solve_cyclic_bidiagonal(std::span<const double> diag, double off, int neighbor,
                             std::span<const double> rhs, std::span<double> out);

/// One fully implicit time step of
///   (f_k^{n+1}-f_k^n)/dt + upwind transport(f_k^{n+1}) = chi_k - rho_other^{n+1} f_k^{n+1},
/// solved by clamped Picard iteration: each sweep clamps the iterate onto the
/// sandwich, freezes the clamped reaction densities, and solves the resulting
/// per-velocity cyclic transport-reaction systems exactly. The per-velocity
/// solves within a sweep are independent and run in parallel.
std::pair<DistributionPair, StepReport> implicit_step(const DistributionPair& f_n,
                                                      const DiscreteProfiles& profiles,
                                                      const PhaseMesh& mesh,
                                                      const SchemeParams& params);

} // namespace kinreact
