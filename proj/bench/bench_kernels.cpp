// Kernel timing: the serial reference loops (naive accumulation) against the
// production kernels (compensated, deterministic, OpenMP over the spatial
// index) at 1 and N threads. Build and run:
//   cmake --build build --target bench_kernels && ./build/bench/bench_kernels
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kinreact/diagnostics.hpp"
#include "kinreact/mesh.hpp"
#include "kinreact/profiles.hpp"
#include "kinreact/reference.hpp"
#include "kinreact/scheme.hpp"
#include "kinreact/state.hpp"
#include "kinreact/testing.hpp"

using namespace kinreact;

namespace {

double wtime() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = wtime();
        fn();
        best = std::min(best, wtime() - t0);
    }
    return best;
}

// captured once at startup; omp_get_max_threads() reports whatever the last
// omp_set_num_threads() installed, so it cannot be queried between runs
int hardware_threads() {
#ifdef _OPENMP
    static const int n = omp_get_max_threads();
    return n;
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

volatile double sink; // keep results alive

template <class Ref, class Par>
void row(const char* name, int reps, Ref&& reference, Par&& parallel) {
    const double t_ref = time_best_of(reps, [&] { sink = reference(); });
    set_threads(1);
    const double t_1 = time_best_of(reps, [&] { sink = parallel(); });
    set_threads(hardware_threads());
    const double t_n = time_best_of(reps, [&] { sink = parallel(); });
    const double diff = std::abs(reference() - parallel());
    std::printf("%-20s %11.3e %11.3e %11.3e %7.2fx %9.1e\n", name, t_ref, t_1, t_n,
                t_1 / t_n, diff);
}

void bench_size(int n_x, int n_v_half) {
    const PhaseMesh mesh = build_mesh(n_x, 1.0, n_v_half, 6.0);
    ProfileSpec gauss;
    const DiscreteProfiles profiles =
        make_profiles(build_profile(gauss, mesh), build_profile(gauss, mesh), mesh);

    std::mt19937_64 rng(7);
    const DistributionPair f = testing::random_sandwich_state(mesh, profiles, 0.5, 2.0, rng);
    const DistributionPair g = testing::random_sandwich_state(mesh, profiles, 0.5, 2.0, rng);
    const EquilibriumState eq = equilibrium_from_initial(f, profiles, mesh);

    std::printf("--- n_x=%d, 2L=%d ---\n", n_x, 2 * n_v_half);
    std::printf("%-20s %11s %11s %11s %8s %9s\n", "kernel", "ref [s]", "1 thr [s]",
                "N thr [s]", "scaling", "|diff|");
    row("entropy_dissipation", 5, [&] { return ref::entropy_dissipation(f, profiles, mesh); },
        [&] { return entropy_dissipation(f, profiles, mesh); });
    row("boltzmann_entropy", 5, [&] { return ref::boltzmann_entropy(f, eq, mesh); },
        [&] { return boltzmann_entropy(f, eq, mesh); });
    row("inner_micro", 5, [&] { return ref::inner_micro(f, g, eq, mesh); },
        [&] { return inner_micro(f, g, eq, mesh); });
    row("moments", 5, [&] { return ref::moments(f, profiles, mesh).j1[0]; },
        [&] { return moments(f, profiles, mesh).j1[0]; });

    SchemeParams params;
    params.dt = 0.05;
    params.rho_m = 0.5;
    params.rho_M = 2.0;
    set_threads(1);
    const double t1 =
        time_best_of(3, [&] { sink = implicit_step(f, profiles, mesh, params).second.residual; });
    set_threads(hardware_threads());
    const double tn =
        time_best_of(3, [&] { sink = implicit_step(f, profiles, mesh, params).second.residual; });
    std::printf("%-20s %11s %11.3e %11.3e %7.2fx\n\n", "implicit_step", "-", t1, tn, t1 / tn);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", hardware_threads());
#else
    std::printf("built without OpenMP; production kernels run serially\n");
#endif
    std::printf("ref = serial naive loops; the production kernels use per-row "
                "compensated partials\ncombined in fixed order, so results are "
                "identical for every thread count.\n\n");
    bench_size(31, 16);
    bench_size(101, 64);
    bench_size(201, 128);
    return 0;
}
