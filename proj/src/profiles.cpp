#include "kinreact/profiles.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "kinreact/errors.hpp"
#include "kinreact/reduce.hpp"

namespace kinreact {

std::vector<double> discretize_profile(const std::function<double(double)>& chi,
                                       const PhaseMesh& mesh) {
    const int n_v = mesh.n_v();
    const int half = mesh.n_v_half;
    std::vector<double> values(static_cast<std::size_t>(n_v));

    for (int a = half; a < n_v; ++a) {
        const double v = mesh.v_centers[static_cast<std::size_t>(a)];
        const double s = chi(v);
        if (!(s > 0.0))
            throw NonPositiveProfile("profile sample at v=" + std::to_string(v) +
                                     " is not positive");
        values[static_cast<std::size_t>(a)] = s;
        values[static_cast<std::size_t>(mesh.mirror(a))] = s;
    }

    Accumulator mass;
    for (double x : values) mass.add(x);
    const double c = 1.0 / (mesh.dv * mass.value());
    for (double& x : values) x *= c;
    return values;
}

ProfileMoments profile_moments(std::span<const double> chi, const PhaseMesh& mesh) {
    Accumulator mass, first, d, q, skew;
    for (int a = 0; a < mesh.n_v(); ++a) {
        const double v = mesh.v_centers[static_cast<std::size_t>(a)];
        const double w = mesh.dv * chi[static_cast<std::size_t>(a)];
        mass.add(w);
        first.add(v * w);
        d.add(v * v * w);
        q.add(v * v * v * v * w);
        skew.add(v * std::abs(v) * w);
    }
    return {mass.value(), first.value(), d.value(), q.value(), skew.value()};
}

DiscreteProfiles make_profiles(std::vector<double> chi1, std::vector<double> chi2,
                               const PhaseMesh& mesh) {
    DiscreteProfiles p;
    p.chi1 = std::move(chi1);
    p.chi2 = std::move(chi2);
    const ProfileMoments m1 = profile_moments(p.chi1, mesh);
    const ProfileMoments m2 = profile_moments(p.chi2, mesh);
    p.d1 = m1.d;
    p.d2 = m2.d;
    p.q1 = m1.q;
    p.q2 = m2.q;
    return p;
}

std::vector<double> build_profile(const ProfileSpec& spec, const PhaseMesh& mesh) {
    switch (spec.family) {
    case ProfileSpec::Family::Uniform: {
        const double c = 1.0 / (2.0 * mesh.v_max);
        return discretize_profile([c](double) { return c; }, mesh);
    }
    case ProfileSpec::Family::Gaussian: {
        const double s2 = 2.0 * spec.sigma * spec.sigma;
        return discretize_profile([s2](double v) { return std::exp(-v * v / s2); }, mesh);
    }
    case ProfileSpec::Family::DoubleBump: {
        const double s2 = 2.0 * spec.sigma * spec.sigma;
        const double v0 = spec.v0;
        return discretize_profile(
            [s2, v0](double v) {
                return std::exp(-(v - v0) * (v - v0) / s2) +
                       std::exp(-(v + v0) * (v + v0) / s2);
            },
            mesh);
    }
    case ProfileSpec::Family::Table:
        return load_profile_table(spec.table_path, mesh);
    }
    throw std::logic_error("unreachable profile family");
}

double continuum_tail_mass(const ProfileSpec& spec, double v_max) {
    switch (spec.family) {
    case ProfileSpec::Family::Uniform:
        return 0.0;
    case ProfileSpec::Family::Gaussian:
        return std::erfc(v_max / (spec.sigma * std::sqrt(2.0)));
    case ProfileSpec::Family::DoubleBump:
        // Symmetric mixture of two unit-mass bumps at +-v0.
        return 0.5 * (std::erfc((v_max - spec.v0) / (spec.sigma * std::sqrt(2.0))) +
                      std::erfc((v_max + spec.v0) / (spec.sigma * std::sqrt(2.0))));
    case ProfileSpec::Family::Table:
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> load_profile_table(const std::string& path, const PhaseMesh& mesh) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open profile table: " + path);

    const int n_v = mesh.n_v();
    std::vector<double> raw;
    raw.reserve(static_cast<std::size_t>(n_v));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        double x;
        if (!(ls >> x))
            throw ParseError(path + ":" + std::to_string(line_no) + ": not a number");
        raw.push_back(x);
    }
    if (static_cast<int>(raw.size()) != n_v)
        throw ParseError(path + ": expected " + std::to_string(n_v) + " values, got " +
                         std::to_string(raw.size()));

    // Symmetrize, then renormalize. Any j<=0 entry is a copy of its mirror.
    std::vector<double> values(static_cast<std::size_t>(n_v));
    for (int a = mesh.n_v_half; a < n_v; ++a) {
        const int b = mesh.mirror(a);
        const double s = 0.5 * (raw[static_cast<std::size_t>(a)] + raw[static_cast<std::size_t>(b)]);
        if (!(s > 0.0))
            throw NonPositiveProfile(path + ": symmetrized value at cell " + std::to_string(a) +
                                     " is not positive");
        values[static_cast<std::size_t>(a)] = s;
        values[static_cast<std::size_t>(b)] = s;
    }
    Accumulator mass;
    for (double x : values) mass.add(x);
    const double c = 1.0 / (mesh.dv * mass.value());
    for (double& x : values) x *= c;
    return values;
}

} // namespace kinreact
