#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kinreact/config.hpp"
#include "kinreact/diagnostics.hpp"
#include "kinreact/elliptic.hpp"
#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"
#include "kinreact/scheme.hpp"
#include "kinreact/state.hpp"

namespace kinreact {

/// Everything a simulation or the verification suite needs, built once from
/// the validated configuration.
struct Setup {
    PhaseMesh mesh;
    DiscreteProfiles profiles;
    DistributionPair f0;
    EquilibriumState eq;
    SchemeParams params;
    TheoreticalConstants consts;
    double delta = 0.0; // modified-entropy parameter (0 disables)
    double tail_mass1 = 0.0, tail_mass2 = 0.0;
};

Setup build_setup(const RunConfig& cfg);

/// Initial condition families.
DistributionPair initial_condition(const RunConfig& cfg, const PhaseMesh& mesh,
                                   const DiscreteProfiles& profiles);

/// Plain-text state table: one value per line, species 1 then species 2,
/// spatial index outermost, 2 * n_x * 2L lines.
DistributionPair load_state_table(const std::string& path, const PhaseMesh& mesh);

struct RunSummary {
    int exit_code = 0;
    long steps = 0;
    long records = 0;
    double kappa_entropy = 0.0;
    double kappa_norm = 0.0;
    double r2_entropy = 0.0;
    double r2_norm = 0.0;
    double final_mass_residual = 0.0;
    double max_mass_residual = 0.0;
    double max_bounds_violation = 0.0;
    long checks_passed = 0;
    long checks_failed = 0;
    std::string failure; // non-empty on solver failure
    std::vector<StepDiagnostics> series;
};

/// Step from t = 0 to t_final, write one diagnostics record per stride to
/// the configured output, and emit a fit/conservation summary. Exit codes:
/// 0 completed (checks pass or check level is not fatal), 2 inequality
/// failure under fatal, 3 solver failure.
RunSummary run_simulation(const RunConfig& cfg, std::ostream& log);

} // namespace kinreact
