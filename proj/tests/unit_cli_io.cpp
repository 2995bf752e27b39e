#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "kinreact/config.hpp"
#include "kinreact/driver.hpp"
#include "kinreact/errors.hpp"
#include "kinreact/state.hpp"

#include <json.hpp>

using namespace kinreact;

namespace {

const char* kMinimalConfig = R"(
# minimal configuration
mesh.n_x = 5
mesh.n_v_half = 3
mesh.v_max = 4.0
init.family = equilibrium
bounds.rho_m = 0.5
bounds.rho_M = 2.0
time.dt = 0.1
time.t_final = 1.0
)";

RunConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "<test>");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig cfg = parse_string(kMinimalConfig);
    CHECK(cfg.picard_tol == 1e-12);
    CHECK(cfg.picard_max_iter == 200);
    CHECK(cfg.delta == 0.0);
    CHECK(cfg.stride == 1);
    CHECK(cfg.torus_length == 1.0);
    CHECK(cfg.check_level == RunConfig::CheckLevel::Log);
    CHECK(cfg.output_format == RunConfig::OutputFormat::Csv);
    CHECK(cfg.profile1.family == ProfileSpec::Family::Gaussian);
}

TEST_CASE("validation failures name the violated field") {
    const auto patch = [&](const std::string& from, const std::string& to) {
        std::string s = kMinimalConfig;
        s.replace(s.find(from), from.size(), to);
        return s;
    };

    CHECK_THROWS_WITH_AS(parse_string(patch("time.t_final = 1.0", "time.t_final = -1")),
                         doctest::Contains("t_final"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_string(patch("mesh.n_x = 5", "mesh.n_x = 6")),
                         doctest::Contains("n_x"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_string(patch("bounds.rho_m = 0.5", "bounds.rho_m = 3.0")),
                         doctest::Contains("rho_m"), ValidationError);
    CHECK_THROWS_AS(parse_string(std::string(kMinimalConfig) + "nonsense.key = 1\n"),
                    ValidationError);
    CHECK_THROWS_AS(parse_string(patch("time.dt = 0.1", "time.dt = fast")), ParseError);
    CHECK_THROWS_AS(parse_string(patch("time.dt = 0.1", "time.dt")), ParseError);
    // missing required key
    CHECK_THROWS_AS(parse_string(patch("mesh.v_max = 4.0", "# gone = 1")), ValidationError);
}

TEST_CASE("duplicate keys are rejected with a line number") {
    CHECK_THROWS_WITH_AS(parse_string(std::string(kMinimalConfig) + "mesh.n_x = 7\n"),
                         doctest::Contains("duplicate"), ParseError);
}

TEST_CASE("profile table wired through the configuration") {
    const char* path = "config_profile_table.txt";
    {
        std::ofstream out(path);
        for (int k = 0; k < 6; ++k) out << (k < 3 ? 0.2 * (k + 1) : 0.2 * (6 - k)) << "\n";
    }
    std::string s(kMinimalConfig);
    s += "profile1.family = table\nprofile1.table = config_profile_table.txt\n";
    const RunConfig cfg = parse_string(s);
    const Setup setup = build_setup(cfg);
    const ProfileMoments m = profile_moments(setup.profiles.chi1, setup.mesh);
    CHECK(std::abs(m.mass - 1.0) <= 1e-14);
    CHECK(std::isnan(setup.tail_mass1));
    std::remove(path);

    std::string missing(kMinimalConfig);
    missing += "profile1.family = table\nprofile1.table = no_such_file.txt\n";
    CHECK_THROWS_AS(parse_string(missing), ValidationError);
}

TEST_CASE("degenerate sandwich at the equilibrium density is valid") {
    std::string text = kMinimalConfig;
    text += "init.rho_star = 1.0\n";
    std::string s = text;
    s.replace(s.find("bounds.rho_m = 0.5"), 18, "bounds.rho_m = 1.0");
    s.replace(s.find("bounds.rho_M = 2.0"), 18, "bounds.rho_M = 1.0");
    const RunConfig cfg = parse_string(s);
    CHECK(cfg.rho_m == cfg.rho_M);
    Setup setup = build_setup(cfg);
    CHECK(check_maximum_principle(setup.f0, setup.profiles, setup.params) <= 0.0);
}

TEST_CASE("initial condition families") {
    SUBCASE("perturbed equilibrium stays inside the sandwich and keeps M0") {
        std::string s(kMinimalConfig);
        s.replace(s.find("init.family = equilibrium"), 25,
                  "init.family = perturbed-equilibrium");
        s += "init.amplitude = 0.2\ninit.mode = 1\n";
        const RunConfig cfg = parse_string(s);
        const Setup setup = build_setup(cfg);
        CHECK(check_maximum_principle(setup.f0, setup.profiles, setup.params) <= 0.0);
        // cosine over full periods sums to zero: rho* is the unperturbed one
        CHECK(setup.eq.rho_star == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mass_difference(setup.f0, setup.mesh) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("uniform densities") {
        std::string s(kMinimalConfig);
        s.replace(s.find("init.family = equilibrium"), 25,
                  "init.family = uniform-densities");
        s += "init.rho_a = 1.7\ninit.rho_b = 0.9\n";
        const RunConfig cfg = parse_string(s);
        const Setup setup = build_setup(cfg);
        const SpatialPair rho = densities(setup.f0, setup.mesh);
        for (double r : rho.c1) CHECK(r == doctest::Approx(1.7).epsilon(1e-13));
        for (double r : rho.c2) CHECK(r == doctest::Approx(0.9).epsilon(1e-13));
    }

    SUBCASE("state table round trip") {
        const PhaseMesh mesh = build_mesh(3, 1.0, 2, 1.0);
        const char* path = "state_table_test.txt";
        {
            std::ofstream out(path);
            for (int k = 0; k < 2 * 3 * 4; ++k) out << 0.1 * (k + 1) << "\n";
        }
        const DistributionPair f = load_state_table(path, mesh);
        CHECK(f.at1(0, 0) == doctest::Approx(0.1));
        CHECK(f.at2(2, 3) == doctest::Approx(2.4));
        {
            std::ofstream out(path);
            out << "1.0\n";
        }
        CHECK_THROWS_AS(load_state_table(path, mesh), ParseError);
        std::remove(path);
    }
}

TEST_CASE("equilibrium run: flat diagnostics, exit 0") {
    RunConfig cfg = parse_string(kMinimalConfig);
    cfg.output_path = "run_eq_test.csv";
    cfg.t_final = 2.0; // 20 steps
    std::ostringstream log;
    const RunSummary s = run_simulation(cfg, log);
    CHECK(s.exit_code == 0);
    CHECK(s.steps == 20);
    CHECK(s.records == 21);
    CHECK(s.checks_failed == 0);
    for (const auto& d : s.series) {
        CHECK(d.entropy <= 1e-16);
        CHECK(d.norm_dev <= 1e-11);
        CHECK(d.mass_residual <= 1e-12);
        CHECK(d.max_principle_violation <= 1e-11);
    }
    std::remove("run_eq_test.csv");
}

TEST_CASE("csv schema and byte reproducibility") {
    RunConfig cfg = parse_string(kMinimalConfig);
    cfg.init_family = RunConfig::InitFamily::PerturbedEquilibrium;
    cfg.init_amplitude = 0.2;
    cfg.init_mode = 1;
    cfg.t_final = 0.5;
    cfg.output_path = "run_repro_a.csv";
    std::ostringstream log;
    run_simulation(cfg, log);
    cfg.output_path = "run_repro_b.csv";
    run_simulation(cfg, log);

    const std::string a = slurp("run_repro_a.csv");
    const std::string b = slurp("run_repro_b.csv");
    CHECK(a == b);
    CHECK(a.substr(0, a.find('\n')) ==
          "step,time,entropy,dissipation,gamma,norm_dev,norm_pi,norm_ortho,"
          "reaction_defect,mass_residual,max_principle_violation,picard_iterations");
    // one header plus one record per step plus the initial record
    CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 5 + 1);
    std::remove("run_repro_a.csv");
    std::remove("run_repro_b.csv");
}

TEST_CASE("jsonl output parses and carries the check flags") {
    RunConfig cfg = parse_string(kMinimalConfig);
    cfg.init_family = RunConfig::InitFamily::PerturbedEquilibrium;
    cfg.init_amplitude = 0.1;
    cfg.init_mode = 1;
    cfg.t_final = 0.3;
    cfg.output_format = RunConfig::OutputFormat::Jsonl;
    cfg.output_path = "run_test.jsonl";
    std::ostringstream log;
    run_simulation(cfg, log);

    std::ifstream in("run_test.jsonl");
    std::string line;
    int records = 0, summaries = 0;
    while (std::getline(in, line)) {
        const nlohmann::json j = nlohmann::json::parse(line);
        if (j.contains("type") && j["type"] == "summary") {
            ++summaries;
            CHECK(j["checks_failed"] == 0);
        } else {
            ++records;
            CHECK(j.contains("entropy"));
            if (j["step"] > 0) CHECK(j["checks"]["entropy_decay"]["pass"] == true);
        }
    }
    CHECK(records == 4);
    CHECK(summaries == 1);
    std::remove("run_test.jsonl");
}

TEST_CASE("solver failure surfaces as exit 3") {
    RunConfig cfg = parse_string(kMinimalConfig);
    cfg.init_family = RunConfig::InitFamily::PerturbedEquilibrium;
    cfg.init_amplitude = 0.2;
    cfg.init_mode = 1;
    cfg.dt = 50.0;
    cfg.t_final = 100.0;
    cfg.picard_max_iter = 1;
    cfg.output_path = "run_fail_test.csv";
    std::ostringstream log;
    const RunSummary s = run_simulation(cfg, log);
    CHECK(s.exit_code == 3);
    CHECK(!s.failure.empty());
    std::remove("run_fail_test.csv");
}

TEST_CASE("double-bump profiles and skewed masses run clean") {
    // non-Maxwellian velocity profiles, equilibrium density away from 1,
    // modified entropy enabled
    RunConfig cfg = parse_string(kMinimalConfig);
    cfg.n_x = 11;
    cfg.n_v_half = 8;
    cfg.v_max = 5.0;
    cfg.profile1.family = ProfileSpec::Family::DoubleBump;
    cfg.profile1.sigma = 0.8;
    cfg.profile1.v0 = 1.5;
    cfg.profile2.family = ProfileSpec::Family::Gaussian;
    cfg.init_family = RunConfig::InitFamily::PerturbedEquilibrium;
    cfg.init_rho_star = 1.5;
    cfg.init_amplitude = 0.1;
    cfg.init_mode = 2;
    cfg.rho_m = 0.6;
    cfg.rho_M = 3.0;
    cfg.dt = 0.05;
    cfg.t_final = 2.0;
    cfg.delta = 0.2;
    cfg.output_path = "run_bump_test.csv";
    std::ostringstream log;
    const RunSummary s = run_simulation(cfg, log);
    CHECK(s.exit_code == 0);
    CHECK(s.checks_failed == 0);
    CHECK(s.steps == 40);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& d : s.series) {
        CHECK(d.mass_residual <= 1e-11);
        CHECK(d.max_principle_violation <= 1e-10);
        CHECK(d.entropy <= prev * (1 + 1e-12) + 1e-12);
        CHECK(d.gamma >= 0.0);
        prev = d.entropy;
    }
    // the conserved mass difference pins the equilibrium density
    const Setup setup = build_setup(cfg);
    CHECK(setup.eq.rho_star == doctest::Approx(1.5).epsilon(1e-12));
    std::remove("run_bump_test.csv");
}

TEST_CASE("stride thins the series") {
    RunConfig cfg = parse_string(kMinimalConfig);
    cfg.init_family = RunConfig::InitFamily::PerturbedEquilibrium;
    cfg.init_amplitude = 0.1;
    cfg.init_mode = 1;
    cfg.t_final = 1.0;
    cfg.stride = 5;
    cfg.output_path = "run_stride_test.csv";
    std::ostringstream log;
    const RunSummary s = run_simulation(cfg, log);
    CHECK(s.exit_code == 0);
    CHECK(s.records == 3); // steps 0, 5, 10
    CHECK(s.series[1].step == 5);
    std::remove("run_stride_test.csv");
}
