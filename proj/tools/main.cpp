#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kinreact/config.hpp"
#include "kinreact/diagnostics.hpp"
#include "kinreact/driver.hpp"
#include "kinreact/errors.hpp"
#include "kinreact/testing.hpp"
#include "kinreact/verify.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& output_override,
                const std::string& check_level_override) {
    kinreact::RunConfig cfg = kinreact::load_config(config_path);
    if (!output_override.empty()) cfg.output_path = output_override;
    if (!check_level_override.empty()) {
        if (check_level_override == "off")
            cfg.check_level = kinreact::RunConfig::CheckLevel::Off;
        else if (check_level_override == "log")
            cfg.check_level = kinreact::RunConfig::CheckLevel::Log;
        else if (check_level_override == "fatal")
            cfg.check_level = kinreact::RunConfig::CheckLevel::Fatal;
        else
            throw kinreact::ValidationError("--check-level must be off, log or fatal");
    }
    const kinreact::RunSummary summary = kinreact::run_simulation(cfg, std::cout);
    return summary.exit_code;
}

int verify_command(const std::string& config_path) {
    const kinreact::RunConfig cfg = kinreact::load_config(config_path);
    const std::uint64_t seed = kinreact::testing::seed_from_env();
    const auto outcomes = kinreact::verify_properties(cfg, seed);
    bool all_pass = true;
    for (const auto& o : outcomes) {
        std::cout << (o.pass ? "PASS " : "FAIL ") << o.name << "  worst=" << o.worst << "  ("
                  << o.detail << ")\n";
        all_pass = all_pass && o.pass;
    }
    std::cout << (all_pass ? "all checks passed" : "some checks FAILED") << " (seed " << seed
              << ")\n";
    return all_pass ? 0 : 2;
}

int fit_command(const std::string& input, const std::string& column, double skip_fraction) {
    std::ifstream in(input);
    if (!in) throw kinreact::ParseError("cannot open input: " + input);

    std::string header;
    if (!std::getline(in, header)) throw kinreact::ParseError(input + ": empty file");
    std::vector<std::string> names;
    {
        std::istringstream hs(header);
        std::string cell;
        while (std::getline(hs, cell, ',')) names.push_back(cell);
    }
    int time_col = -1, value_col = -1;
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (names[k] == "time") time_col = static_cast<int>(k);
        if (names[k] == column) value_col = static_cast<int>(k);
    }
    if (time_col < 0) throw kinreact::ParseError(input + ": no 'time' column");
    if (value_col < 0) throw kinreact::ParseError(input + ": no '" + column + "' column");

    std::vector<double> ts, ys;
    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int k = 0;
        double t = 0.0, y = 0.0;
        while (std::getline(ls, cell, ',')) {
            if (k == time_col) t = std::stod(cell);
            if (k == value_col) y = std::stod(cell);
            ++k;
        }
        if (k <= std::max(time_col, value_col))
            throw kinreact::ParseError(input + ":" + std::to_string(line_no) +
                                       ": too few columns");
        ts.push_back(t);
        ys.push_back(y);
    }

    const auto first = static_cast<std::size_t>(skip_fraction * ts.size());
    const kinreact::DecayFit fit = kinreact::fit_decay_rate(ts, ys, first, ts.size());
    std::cout << "kappa = " << fit.kappa << "\nprefactor = " << fit.prefactor
              << "\nr_squared = " << fit.r_squared << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"structure-preserving solver for a two-species kinetic reaction system"};
    app.require_subcommand(1);

    std::string config_path, output_override, check_level_override;
    auto* run = app.add_subcommand("run", "step the scheme and persist the diagnostics series");
    run->add_option("--config", config_path, "configuration file")->required();
    run->add_option("--output", output_override, "override output.path");
    run->add_option("--check-level", check_level_override, "override check.level");

    std::string verify_config;
    auto* verify = app.add_subcommand("verify", "run the property suite without time stepping");
    verify->add_option("--config", verify_config, "configuration file")->required();

    std::string fit_input, fit_column = "norm_dev";
    double fit_skip = 0.2;
    auto* fit = app.add_subcommand("fit", "least-squares exponential decay fit on a CSV column");
    fit->add_option("--input", fit_input, "CSV series file")->required();
    fit->add_option("--column", fit_column, "column to fit");
    fit->add_option("--skip-fraction", fit_skip, "fraction of leading samples to discard");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, output_override, check_level_override);
        if (verify->parsed()) return verify_command(verify_config);
        if (fit->parsed()) return fit_command(fit_input, fit_column, fit_skip);
    } catch (const kinreact::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kinreact::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kinreact::PicardDiverged& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const kinreact::BoundsRejected& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
