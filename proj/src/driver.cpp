#include "kinreact/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "kinreact/errors.hpp"

namespace kinreact {

DistributionPair load_state_table(const std::string& path, const PhaseMesh& mesh) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state table: " + path);
    const std::size_t per_species =
        static_cast<std::size_t>(mesh.n_x) * static_cast<std::size_t>(mesh.n_v());
    std::vector<double> raw;
    raw.reserve(2 * per_species);
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
    if (raw.size() != 2 * per_species)
        throw ParseError(path + ": expected " + std::to_string(2 * per_species) +
                         " values, got " + std::to_string(raw.size()));
    DistributionPair f = DistributionPair::zeros(mesh);
    std::copy(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(per_species), f.f1.begin());
    std::copy(raw.begin() + static_cast<std::ptrdiff_t>(per_species), raw.end(), f.f2.begin());
    if (!all_finite(f)) throw ValidationError(path + ": state table contains non-finite values");
    return f;
}

DistributionPair initial_condition(const RunConfig& cfg, const PhaseMesh& mesh,
                                   const DiscreteProfiles& profiles) {
    DistributionPair f = DistributionPair::zeros(mesh);
    switch (cfg.init_family) {
    case RunConfig::InitFamily::Equilibrium: {
        const double r1 = cfg.init_rho_star;
        const double r2 = 1.0 / cfg.init_rho_star;
        for (int i = 0; i < mesh.n_x; ++i)
            for (int j = 0; j < mesh.n_v(); ++j) {
                const auto k = static_cast<std::size_t>(j);
                f.at1(i, j) = r1 * profiles.chi1[k];
                f.at2(i, j) = r2 * profiles.chi2[k];
            }
        return f;
    }
    case RunConfig::InitFamily::UniformDensities: {
        for (int i = 0; i < mesh.n_x; ++i)
            for (int j = 0; j < mesh.n_v(); ++j) {
                const auto k = static_cast<std::size_t>(j);
                f.at1(i, j) = cfg.init_rho_a * profiles.chi1[k];
                f.at2(i, j) = cfg.init_rho_b * profiles.chi2[k];
            }
        return f;
    }
    case RunConfig::InitFamily::PerturbedEquilibrium: {
        const double r1 = cfg.init_rho_star;
        const double r2 = 1.0 / cfg.init_rho_star;
        for (int i = 0; i < mesh.n_x; ++i) {
            const double phase = 2.0 * std::numbers::pi * cfg.init_mode * mesh.x_center(i) /
                                 mesh.torus_length;
            const double factor = 1.0 + cfg.init_amplitude * std::cos(phase);
            for (int j = 0; j < mesh.n_v(); ++j) {
                const auto k = static_cast<std::size_t>(j);
                f.at1(i, j) = r1 * factor * profiles.chi1[k];
                f.at2(i, j) = r2 * factor * profiles.chi2[k];
            }
        }
        return f;
    }
    case RunConfig::InitFamily::Table:
        return load_state_table(cfg.init_table, mesh);
    }
    throw std::logic_error("unreachable init family");
}

Setup build_setup(const RunConfig& cfg) {
    Setup s;
    s.mesh = build_mesh(cfg.n_x, cfg.torus_length, cfg.n_v_half, cfg.v_max);
    s.profiles = make_profiles(build_profile(cfg.profile1, s.mesh),
                               build_profile(cfg.profile2, s.mesh), s.mesh);
    s.f0 = initial_condition(cfg, s.mesh, s.profiles);
    s.eq = equilibrium_from_initial(s.f0, s.profiles, s.mesh);
    s.params.dt = cfg.dt;
    s.params.rho_m = cfg.rho_m;
    s.params.rho_M = cfg.rho_M;
    s.params.picard_tol = cfg.picard_tol;
    s.params.picard_max_iter = cfg.picard_max_iter;
    s.params.enforce_bounds = cfg.enforce_bounds;
    s.consts = theoretical_constants(s.profiles, s.eq, cfg.rho_m, cfg.rho_M,
                                     poincare_constant(s.mesh));
    s.delta = cfg.delta;
    s.tail_mass1 = continuum_tail_mass(cfg.profile1, cfg.v_max);
    s.tail_mass2 = continuum_tail_mass(cfg.profile2, cfg.v_max);
    return s;
}

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class SeriesWriter {
public:
    SeriesWriter(const std::string& path, RunConfig::OutputFormat format)
        : out_(path), format_(format) {
        if (!out_) throw ParseError("cannot open output file: " + path);
        if (format_ == RunConfig::OutputFormat::Csv)
            out_ << "step,time,entropy,dissipation,gamma,norm_dev,norm_pi,norm_ortho,"
                    "reaction_defect,mass_residual,max_principle_violation,picard_iterations\n";
    }

    void record(const StepDiagnostics& d) {
        if (format_ == RunConfig::OutputFormat::Csv) {
            out_ << d.step << ',' << fmt17(d.time) << ',' << fmt17(d.entropy) << ','
                 << fmt17(d.dissipation) << ',' << fmt17(d.gamma) << ',' << fmt17(d.norm_dev)
                 << ',' << fmt17(d.norm_pi) << ',' << fmt17(d.norm_ortho) << ','
                 << fmt17(d.reaction_defect) << ',' << fmt17(d.mass_residual) << ','
                 << fmt17(d.max_principle_violation) << ',' << d.picard_iterations << '\n';
        } else {
            nlohmann::json j{{"step", d.step},
                             {"time", d.time},
                             {"entropy", d.entropy},
                             {"dissipation", d.dissipation},
                             {"gamma", d.gamma},
                             {"norm_dev", d.norm_dev},
                             {"norm_pi", d.norm_pi},
                             {"norm_ortho", d.norm_ortho},
                             {"reaction_defect", d.reaction_defect},
                             {"mass_residual", d.mass_residual},
                             {"max_principle_violation", d.max_principle_violation},
                             {"picard_iterations", d.picard_iterations}};
            if (!d.checks.empty()) {
                nlohmann::json checks = nlohmann::json::object();
                for (const auto& c : d.checks)
                    checks[c.name] = {{"pass", c.pass}, {"margin", c.margin}};
                j["checks"] = checks;
            }
            out_ << j.dump() << '\n';
        }
    }

    void summary(const RunSummary& s) {
        if (format_ != RunConfig::OutputFormat::Jsonl) return;
        nlohmann::json j{{"type", "summary"},
                         {"steps", s.steps},
                         {"kappa_entropy", s.kappa_entropy},
                         {"kappa_norm", s.kappa_norm},
                         {"r2_entropy", s.r2_entropy},
                         {"r2_norm", s.r2_norm},
                         {"final_mass_residual", s.final_mass_residual},
                         {"max_mass_residual", s.max_mass_residual},
                         {"max_bounds_violation", s.max_bounds_violation},
                         {"checks_passed", s.checks_passed},
                         {"checks_failed", s.checks_failed}};
        out_ << j.dump() << '\n';
    }

private:
    std::ofstream out_;
    RunConfig::OutputFormat format_;
};

} // namespace

RunSummary run_simulation(const RunConfig& cfg, std::ostream& log) {
    Setup s = build_setup(cfg);
    const PoissonSolver poisson(s.mesh);
    RunSummary summary;

    log << "equilibrium density rho* = " << s.eq.rho_star << ", poincare constant = "
        << s.consts.poincare << "\n";
    if (std::isfinite(s.tail_mass1))
        log << "profile tail mass beyond v_max: " << s.tail_mass1 << " (species 1), "
            << s.tail_mass2 << " (species 2)\n";

    const double ic_violation = check_maximum_principle(s.f0, s.profiles, s.params);
    if (ic_violation > 1e-12 * std::max(1.0, sup_norm(s.f0))) {
        if (cfg.check_level == RunConfig::CheckLevel::Fatal)
            throw ValidationError("initial condition violates the declared sandwich by " +
                                  std::to_string(ic_violation));
        log << "warning: initial condition violates the declared sandwich by " << ic_violation
            << "\n";
    }

    SeriesWriter writer(cfg.output_path, cfg.output_format);
    const double m0 = mass_difference(s.f0, s.mesh);
    const long n_steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-12));

    // Rolling state for the two-level checks and the modified entropy.
    DistributionPair cur = s.f0;
    double entropy_prev = 0.0;
    std::vector<double> gphi1_prev, gphi2_prev;
    bool have_prev_record = false;

    std::vector<double> fit_t, fit_entropy, fit_norm;

    auto evaluate = [&](long step, double time, const DistributionPair& f,
                        const StepReport* report) {
        StepDiagnostics d;
        d.step = step;
        d.time = time;
        d.entropy = boltzmann_entropy(f, s.eq, s.mesh);
        d.dissipation = entropy_dissipation(f, s.profiles, s.mesh);
        const ModifiedEntropy gamma =
            modified_entropy(f, gphi1_prev, gphi2_prev, s.eq, s.profiles, s.mesh, poisson,
                             s.delta, cfg.dt);
        d.gamma = gamma.gamma;

        const DistributionPair dev = deviation(f, s.eq);
        const DistributionPair pi_dev = project_pi(dev, s.profiles, s.mesh);
        DistributionPair ortho = dev;
        for (std::size_t k = 0; k < ortho.f1.size(); ++k) ortho.f1[k] -= pi_dev.f1[k];
        for (std::size_t k = 0; k < ortho.f2.size(); ++k) ortho.f2[k] -= pi_dev.f2[k];
        d.norm_dev = norm_micro(dev, s.eq, s.mesh);
        d.norm_pi = norm_micro(pi_dev, s.eq, s.mesh);
        d.norm_ortho = norm_micro(ortho, s.eq, s.mesh);

        const SpatialPair rho = densities(f, s.mesh);
        std::vector<double> defect(rho.c1.size());
        for (std::size_t i = 0; i < defect.size(); ++i)
            defect[i] = 1.0 - rho.c1[i] * rho.c2[i];
        d.reaction_defect = l2_torus(defect, s.mesh);
        d.mass_residual = std::abs(mass_difference(f, s.mesh) - m0);
        d.max_principle_violation = check_maximum_principle(f, s.profiles, s.params);
        if (report) d.picard_iterations = report->picard_iterations;
        return std::pair{d, gamma};
    };

    auto emit = [&](const StepDiagnostics& d) {
        writer.record(d);
        summary.series.push_back(d);
        fit_t.push_back(d.time);
        fit_entropy.push_back(d.entropy);
        fit_norm.push_back(d.norm_dev);
        summary.max_mass_residual = std::max(summary.max_mass_residual, d.mass_residual);
        summary.max_bounds_violation =
            std::max(summary.max_bounds_violation, d.max_principle_violation);
        summary.final_mass_residual = d.mass_residual;
        ++summary.records;
    };

    // Step 0 record; the previous potential defaults to the current one.
    {
        auto [d0, gamma0] = evaluate(0, 0.0, cur, nullptr);
        gphi1_prev = gamma0.grad_phi1;
        gphi2_prev = gamma0.grad_phi2;
        entropy_prev = d0.entropy;
        have_prev_record = true;
        emit(d0);
    }

    DistributionPair prev = cur;
    bool fatal_failure = false;

    for (long n = 1; n <= n_steps && !fatal_failure; ++n) {
        StepReport report;
        try {
            auto [next, rep] = implicit_step(cur, s.profiles, s.mesh, s.params);
            prev = std::move(cur);
            cur = std::move(next);
            report = rep;
        } catch (const PicardDiverged& e) {
            summary.failure = e.what();
            summary.exit_code = 3;
            summary.steps = n - 1;
            log << "solver failure at step " << n << ": " << e.what() << "\n";
            writer.summary(summary);
            return summary;
        }
        summary.steps = n;

        if (n % cfg.stride != 0) {
            have_prev_record = false;
            continue;
        }

        auto [d, gamma] = evaluate(n, n * cfg.dt, cur, &report);

        if (cfg.check_level != RunConfig::CheckLevel::Off && cfg.stride == 1 &&
            have_prev_record) {
            StepCheckInput in;
            in.f_n = &prev;
            in.f_np1 = &cur;
            in.entropy_n = entropy_prev;
            in.entropy_np1 = d.entropy;
            in.dissipation_np1 = d.dissipation;
            in.grad_phi1_n = gphi1_prev;
            in.grad_phi2_n = gphi2_prev;
            in.grad_phi1_np1 = gamma.grad_phi1;
            in.grad_phi2_np1 = gamma.grad_phi2;
            d.checks = check_step_inequalities(in, s.consts, s.params, s.eq, s.profiles, s.mesh);
            for (const auto& c : d.checks) {
                if (c.pass) {
                    ++summary.checks_passed;
                } else {
                    ++summary.checks_failed;
                    log << "check failed at step " << n << ": " << c.name
                        << " (margin " << c.margin << ")\n";
                    if (cfg.check_level == RunConfig::CheckLevel::Fatal) fatal_failure = true;
                }
            }
        }

        gphi1_prev = gamma.grad_phi1;
        gphi2_prev = gamma.grad_phi2;
        entropy_prev = d.entropy;
        have_prev_record = true;
        emit(d);
    }

    // Decay fits on the post-transient window.
    const std::size_t n_records = fit_t.size();
    const auto first = static_cast<std::size_t>(cfg.fit_skip_fraction * n_records);
    if (n_records - first >= 5) {
        try {
            const DecayFit fh = fit_decay_rate(fit_t, fit_entropy, first, n_records);
            summary.kappa_entropy = fh.kappa;
            summary.r2_entropy = fh.r_squared;
        } catch (const std::invalid_argument&) {
            summary.kappa_entropy = std::numeric_limits<double>::quiet_NaN();
        }
        try {
            const DecayFit fn = fit_decay_rate(fit_t, fit_norm, first, n_records);
            summary.kappa_norm = fn.kappa;
            summary.r2_norm = fn.r_squared;
        } catch (const std::invalid_argument&) {
            summary.kappa_norm = std::numeric_limits<double>::quiet_NaN();
        }
    }

    if (fatal_failure) summary.exit_code = 2;
    writer.summary(summary);

    log << "steps = " << summary.steps << ", records = " << summary.records << "\n"
        << "kappa_entropy = " << summary.kappa_entropy << " (r2 = " << summary.r2_entropy
        << ")\n"
        << "kappa_norm = " << summary.kappa_norm << " (r2 = " << summary.r2_norm << ")\n"
        << "final_mass_residual = " << summary.final_mass_residual
        << ", max_mass_residual = " << summary.max_mass_residual << "\n"
        << "max_bounds_violation = " << summary.max_bounds_violation << "\n"
        << "checks passed = " << summary.checks_passed
        << ", failed = " << summary.checks_failed << "\n";
    return summary;
}

} // namespace kinreact
