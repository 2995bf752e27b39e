#pragma once

#include <string>
#include <vector>

#include "kinreact/elliptic.hpp"
#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"
#include "kinreact/scheme.hpp"
#include "kinreact/state.hpp"

namespace kinreact {

/// Constants entering the provable per-step inequalities, instantiated with
/// the computed profile moments (the tightest testable choice), the
/// equilibrium densities, the declared sandwich and the computed discrete
/// Poincare constant.
struct TheoreticalConstants {
    double c1 = 0.0; // sqrt(max(D_1, D_2)) (first-moment estimate)
    double c2 = 0.0; // sqrt(max(Q_k - D_k^2)) (centered second moment)
    double c3 = 0.0; // sqrt(max(Q_1, Q_2)) (skewed second moment)
    double c4 = 0.0; // time-discretization dissipation coefficient
    double c5 = 0.0; // reaction-defect coefficient in the dissipation bound
    double c6 = 0.0; // kinetic-part coefficient in the dissipation bound
    double c7 = 0.0; // C_P sqrt(rho1* + rho2*) (potential increment)
    double c8 = 0.0; // 2 max(rho_M^2 rho2*, rho_m^-2 rho1*)
    double c_h = 0.0; // lower entropy-sandwich constant
    double big_c_h = 0.0; // upper entropy-sandwich constant
    double poincare = 0.0; // computed discrete Poincare constant
};

TheoreticalConstants theoretical_constants(const DiscreteProfiles& profiles,
                                           const EquilibriumState& eq, double rho_m,
                                           double rho_M, double poincare);

/// Largest delta for which the modified entropy provably stays equivalent to
/// the squared weighted distance is c_h / (c1 * C_P); default to half of it.
double default_gamma_delta(const TheoreticalConstants& c);

struct InequalityCheck {
    std::string name;
    bool pass = false;
    double margin = 0.0; // slack remaining; >= 0 iff pass
};

/// Per-step record written to the output series.
struct StepDiagnostics {
    long step = 0;
    double time = 0.0;
    double entropy = 0.0;
    double dissipation = 0.0;
    double gamma = 0.0;
    double norm_dev = 0.0;   // ||F - F*||
    double norm_pi = 0.0;    // ||Pi (F - F*)||
    double norm_ortho = 0.0; // ||(I - Pi)(F - F*)||
    double reaction_defect = 0.0; // ||1 - rho1 rho2||_L2
    double mass_residual = 0.0;   // |M^n - M_0|
    double max_principle_violation = 0.0;
    int picard_iterations = 0;
    std::vector<InequalityCheck> checks;
};

/// Relative Boltzmann entropy
///   H = sum dx dv [ f (log(f/f*) - 1) + f* ]
/// over both species; nonnegative, zero only at equilibrium. Evaluated
/// through log1p of the deviation so the decay signal survives near
/// equilibrium. Throws NonPositiveState unless F is entrywise positive.
double boltzmann_entropy(const DistributionPair& f, const EquilibriumState& eq,
                         const PhaseMesh& mesh);

/// Entropy dissipation, a triple sum over space and two velocity indices:
///   D = sum dx dv^2 (f1_ij f2_im - chi1_j chi2_m) log(f1_ij f2_im / (chi1_j chi2_m))
/// of the form (b - a) log(b/a) >= 0.
double entropy_dissipation(const DistributionPair& f, const DiscreteProfiles& profiles,
                           const PhaseMesh& mesh);

struct ModifiedEntropy {
    double gamma = 0.0;
    double cross_term = 0.0;     // <J, D_x^c Phi> weighted in position
    double increment_term = 0.0; // (delta/2dt) sum dx (D_x^c Phi - previous)^2
    std::vector<double> grad_phi1, grad_phi2; // D_x^c Phi, kept for chaining
};

/// Modified entropy Gamma = H + delta <J, D_x^c Phi> + increment term. The
/// previous potential gradients may be empty, which means "first evaluation":
/// the previous potential is defined equal to the current one and the
/// increment term starts at zero.
ModifiedEntropy modified_entropy(const DistributionPair& f,
                                 std::span<const double> prev_grad_phi1,
                                 std::span<const double> prev_grad_phi2,
                                 const EquilibriumState& eq, const DiscreteProfiles& profiles,
                                 const PhaseMesh& mesh, const PoissonSolver& poisson,
                                 double delta, double dt);

/// Inputs for the two-level inequality checks.
struct StepCheckInput {
    const DistributionPair* f_n = nullptr;
    const DistributionPair* f_np1 = nullptr;
    double entropy_n = 0.0;
    double entropy_np1 = 0.0;
    double dissipation_np1 = 0.0;
    std::span<const double> grad_phi1_n, grad_phi2_n;     // D_x^c Phi^n
    std::span<const double> grad_phi1_np1, grad_phi2_np1; // D_x^c Phi^{n+1}
};

/// Evaluates, with margins:
///   entropy_decay        (H^{n+1}-H^n)/dt <= -D^{n+1} - (c4/dt)||F^{n+1}-F^n||^2 + eps
///   dissipation_bound    D^{n+1} >= c5 ||1-rho1 rho2||^2 + c6 ||(I-Pi)Ft||^2 - eps
///   moment_residual_rho  density moment scheme residual, inf-norm
///   moment_residual_j    first moment scheme residual, inf-norm
///   potential_bound      ||D_x^c Phi^{n+1}|| <= C_P ||Pi Ft^{n+1}|| + eps
///   potential_increment  ||D_x^c Phi^{n+1} - D_x^c Phi^n|| <= dt (c1 ||(I-Pi)Ft|| +
///                        c7 ||1-rho1 rho2|| + c1 ||Ft||) + eps
/// with eps = 1e-9 max(1, |H^{n+1}|); the moment residual threshold is
/// 10 picard_tol / dt (the schemes are exact for exact solutions, so the
/// residual is pure solver error).
std::vector<InequalityCheck> check_step_inequalities(const StepCheckInput& in,
                                                     const TheoreticalConstants& consts,
                                                     const SchemeParams& params,
                                                     const EquilibriumState& eq,
                                                     const DiscreteProfiles& profiles,
                                                     const PhaseMesh& mesh);

struct DecayFit {
    double kappa = 0.0;     // -slope of log(value) vs t
    double prefactor = 0.0; // exp(intercept)
    double r_squared = 0.0;
};

/// Least-squares line fit of log(value) against time over [first, last).
/// Throws WindowTooShort (< 5 points) or NonPositiveSeries.
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> value,
                        std::size_t first, std::size_t last);

} // namespace kinreact
