#pragma once

#include <vector>

namespace kinreact {

/// Uniform periodic grid on the torus crossed with a symmetric uniform
/// velocity grid on [-v_max, v_max].
///
/// Velocity cells are stored 0-based: storage index a in [0, 2L) corresponds
/// to the signed cell index j = a - L + 1 in {-L+1, ..., L}. Midpoints are
/// v[a] = (a - L + 1/2) * dv, which is antisymmetric about the interface
/// v_{1/2} = 0 separating the sign groups; no midpoint ever vanishes.
struct PhaseMesh {
    int n_x = 0;             // spatial cell count, odd
    double dx = 0.0;         // torus_length / n_x
    double torus_length = 0.0;
    int n_v_half = 0;        // L; total velocity cells = 2L
    double dv = 0.0;         // v_max / L
    double v_max = 0.0;
    std::vector<double> v_centers; // size 2L

    int n_v() const { return 2 * n_v_half; }
    double x_center(int i) const { return (i + 0.5) * dx; }

    /// Reflection j -> -j+1 in storage coordinates; an involution.
    int mirror(int a) const { return n_v() - 1 - a; }
    /// Storage index of signed cell index j in {-L+1, ..., L}.
    int storage_index(int signed_j) const { return signed_j + n_v_half - 1; }
    /// Signed cell index of storage index a.
    int signed_index(int a) const { return a - n_v_half + 1; }
};

/// Build and validate the mesh.
/// Throws EvenSpatialGrid when n_x is even (the discrete Poincare inequality
/// and the centered Laplacian kernel both require odd n_x) and
/// NonPositiveExtent when any count or extent is not positive.
PhaseMesh build_mesh(int n_x, double torus_length, int n_v_half, double v_max);

} // namespace kinreact
