#include "kinreact/mesh.hpp"

#include <string>

#include "kinreact/errors.hpp"

namespace kinreact {

PhaseMesh build_mesh(int n_x, double torus_length, int n_v_half, double v_max) {
    if (n_x < 3)
        throw NonPositiveExtent("n_x must be >= 3, got " + std::to_string(n_x));
    if (n_x % 2 == 0)
        throw EvenSpatialGrid("spatial cell count must be odd, got " + std::to_string(n_x));
    if (n_v_half < 1)
        throw NonPositiveExtent("n_v_half must be >= 1, got " + std::to_string(n_v_half));
    if (!(torus_length > 0.0))
        throw NonPositiveExtent("torus_length must be positive");
    if (!(v_max > 0.0))
        throw NonPositiveExtent("v_max must be positive");

    PhaseMesh mesh;
    mesh.n_x = n_x;
    mesh.torus_length = torus_length;
    mesh.dx = torus_length / n_x;
    mesh.n_v_half = n_v_half;
    mesh.v_max = v_max;
    mesh.dv = v_max / n_v_half;

    // (a - L + 1/2) is exactly representable and exactly negated under the
    // reflection a -> 2L-1-a, so the centers are bitwise antisymmetric.
    mesh.v_centers.resize(static_cast<std::size_t>(2 * n_v_half));
    for (int a = 0; a < 2 * n_v_half; ++a)
        mesh.v_centers[static_cast<std::size_t>(a)] = (a - n_v_half + 0.5) * mesh.dv;

    return mesh;
}

} // namespace kinreact
