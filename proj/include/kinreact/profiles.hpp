#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinreact/mesh.hpp"

namespace kinreact {

/// Discrete velocity profiles chi_{k,j} for the two species, normalized to
/// unit discrete mass, bitwise symmetric under j -> -j+1, together with
/// their second moments D_k = sum dv v^2 chi and fourth moments
/// Q_k = sum dv v^4 chi.
struct DiscreteProfiles {
    std::vector<double> chi1, chi2; // per-cell values, length 2L
    double d1 = 0.0, d2 = 0.0;
    double q1 = 0.0, q2 = 0.0;
};

struct ProfileMoments {
    double mass = 0.0;         // sum dv chi
    double first_moment = 0.0; // sum dv v chi
    double d = 0.0;            // sum dv v^2 chi
    double q = 0.0;            // sum dv v^4 chi
    double skew_moment = 0.0;  // sum dv v|v| chi
};

/// Sample a positive even function at the cell centers of the positive
/// half-grid, mirror the values onto the negative half, and normalize so
/// that sum_j dv chi_j = 1. Mirroring is a copy, never a re-evaluation, so
/// the symmetry that feeds the conservation identities is exact.
/// Throws NonPositiveProfile if any sampled value is <= 0.
std::vector<double> discretize_profile(const std::function<double(double)>& chi,
                                       const PhaseMesh& mesh);

ProfileMoments profile_moments(std::span<const double> chi, const PhaseMesh& mesh);

DiscreteProfiles make_profiles(std::vector<double> chi1, std::vector<double> chi2,
                               const PhaseMesh& mesh);

/// Built-in profile families plus a raw-table loader.
struct ProfileSpec {
    enum class Family { Uniform, Gaussian, DoubleBump, Table };
    Family family = Family::Gaussian;
    double sigma = 1.0;      // gaussian / double-bump width
    double v0 = 2.0;         // double-bump center offset
    std::string table_path;  // table family
};

std::vector<double> build_profile(const ProfileSpec& spec, const PhaseMesh& mesh);

/// Mass the continuous profile carries outside [-v_max, v_max], before
/// discrete renormalization. Closed form per family; NaN for tables, where
/// the continuum profile is unknown. Reported as a diagnostic only.
double continuum_tail_mass(const ProfileSpec& spec, double v_max);

/// Plain text, one value per line, 2L lines, interpreted as chi at the cell
/// centers before normalization. Values are symmetrized by averaging the
/// mirror pairs (the stored profile must be exactly even).
std::vector<double> load_profile_table(const std::string& path, const PhaseMesh& mesh);

} // namespace kinreact
