#pragma once

#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"
#include "kinreact/state.hpp"

namespace kinreact::ref {

// Serial single-thread implementations of the hot kernels, written as the
// plainest possible loops with bare accumulation. They are the independent
// oracles the tests compare the production kernels against, and the serial
// side of the benchmark. No OpenMP, no compensated summation.

SpatialPair densities(const DistributionPair& f, const PhaseMesh& mesh);

MomentSet moments(const DistributionPair& f, const DiscreteProfiles& profiles,
                  const PhaseMesh& mesh);

double inner_micro(const DistributionPair& f, const DistributionPair& g,
                   const EquilibriumState& eq, const PhaseMesh& mesh);

double boltzmann_entropy(const DistributionPair& f, const EquilibriumState& eq,
                         const PhaseMesh& mesh);

double entropy_dissipation(const DistributionPair& f, const DiscreteProfiles& profiles,
                           const PhaseMesh& mesh);

double mass_difference(const DistributionPair& f, const PhaseMesh& mesh);

} // namespace kinreact::ref
