#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kinreact/config.hpp"

namespace kinreact {

struct CheckOutcome {
    std::string name;
    bool pass = false;
    double worst = 0.0; // worst observed error or violation
    std::string detail;
};

/// Runs the property suite on the configured setup, without time stepping:
/// mesh and profile invariants, gradient operator identities, the discrete
/// Poincare inequality, flux equivalence and monotonicity, moment estimates,
/// projection orthogonality, Poisson residual/gauge/self-adjointness,
/// equilibrium identities, the entropy sandwich, clamp idempotence, and
/// consistency of the parallel kernels with the serial reference.
std::vector<CheckOutcome> verify_properties(const RunConfig& cfg, std::uint64_t seed);

} // namespace kinreact
