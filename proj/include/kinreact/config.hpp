#pragma once

#include <iosfwd>
#include <string>

#include "kinreact/profiles.hpp"

namespace kinreact {

/// Fully validated run configuration. Loaded from flat key-value text with
/// dotted sections, e.g.
///
///   mesh.n_x = 31
///   mesh.torus_length = 1.0
///   mesh.n_v_half = 16
///   mesh.v_max = 6.0
///   profile1.family = gaussian
///   init.family = perturbed-equilibrium
///   init.amplitude = 0.2
///   init.mode = 1
///   bounds.rho_m = 0.5
///   bounds.rho_M = 2.0
///   time.dt = 0.05
///   time.t_final = 20.0
struct RunConfig {
    // mesh
    int n_x = 0;
    double torus_length = 1.0;
    int n_v_half = 0;
    double v_max = 0.0;

    // velocity profiles
    ProfileSpec profile1, profile2;

    // initial condition
    enum class InitFamily { Equilibrium, UniformDensities, PerturbedEquilibrium, Table };
    InitFamily init_family = InitFamily::Equilibrium;
    double init_rho_star = 1.0;  // equilibrium / perturbed-equilibrium
    double init_rho_a = 0.0;     // uniform-densities
    double init_rho_b = 0.0;
    double init_amplitude = 0.0; // perturbed-equilibrium
    int init_mode = 1;
    std::string init_table;

    // declared sandwich
    double rho_m = 0.0;
    double rho_M = 0.0;

    // time stepping
    double dt = 0.0;
    double t_final = 0.0;

    // nonlinear solver
    double picard_tol = 1e-12;
    int picard_max_iter = 200;
    bool enforce_bounds = true;

    // diagnostics
    double delta = 0.0; // 0 disables the modified entropy's extra terms
    int stride = 1;
    double fit_skip_fraction = 0.2;

    enum class CheckLevel { Off, Log, Fatal };
    CheckLevel check_level = CheckLevel::Log;

    // output
    std::string output_path = "series.csv";
    enum class OutputFormat { Csv, Jsonl };
    OutputFormat output_format = OutputFormat::Csv;
};

/// Parse and validate. Throws ParseError with file:line on malformed input
/// and ValidationError naming the violated field or invariant.
RunConfig load_config(const std::string& path);
RunConfig parse_config(std::istream& in, const std::string& origin);

} // namespace kinreact
