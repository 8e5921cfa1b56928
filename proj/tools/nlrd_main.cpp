// Command-line front end: scenario runs, parameter sweeps, C* estimation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlrd/harness.hpp"

namespace {

nlrd::Scenario resolve_scenario(const std::string& ref) {
    if (nlrd::is_preset(ref)) return nlrd::preset(ref);
    return nlrd::load_scenario(ref);
}

void print_manifest(const nlrd::RunManifest& man) {
    std::cout << "scenario: " << man.scenario << "\n"
              << "outcome:  " << man.outcome << "\n";
    for (const auto& r : man.analyses) {
        std::cout << "  " << (r.passed ? "pass " : "FAIL ") << r.name;
        for (const auto& [k, v] : r.values) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %s=%g", k.c_str(), v);
            std::cout << buf;
        }
        if (!r.note.empty()) std::cout << "  (" << r.note << ")";
        std::cout << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nlrd: radial nonlocal reaction-diffusion laboratory"};
    app.require_subcommand(1);

    std::string scenario_ref, out_dir, cstar_file, axis, seed_profile = "all";
    std::vector<double> values;
    int workers = 1, dim = 3, count = 512;
    double radius = 20.0;

    auto* cmd_run = app.add_subcommand("run", "execute a scenario (preset name or config file)");
    cmd_run->add_option("scenario", scenario_ref, "preset name or config path")->required();
    cmd_run->add_option("--out", out_dir, "output directory override");
    cmd_run->add_option("--cstar-file", cstar_file, "estimate JSON for auto-threshold M0");

    auto* cmd_sweep = app.add_subcommand("sweep", "run a scenario across one parameter axis");
    cmd_sweep->add_option("scenario", scenario_ref, "preset name or config path")->required();
    cmd_sweep->add_option("--axis", axis, "M0 | alpha | N | R | dt_max")->required();
    cmd_sweep->add_option("--values", values, "axis values")->required()->delimiter(',');
    cmd_sweep->add_option("--workers", workers, "parallel runs");
    cmd_sweep->add_option("--out", out_dir, "output root directory");

    auto* cmd_cstar = app.add_subcommand("cstar", "estimate the variational constant C*");
    cmd_cstar->add_option("--n", dim, "space dimension (>= 3)")->required();
    cmd_cstar->add_option("--radius", radius, "grid truncation radius");
    cmd_cstar->add_option("--count", count, "grid node count");
    cmd_cstar->add_option("--out", out_dir, "output directory");
    cmd_cstar->add_option("--seed-profile", seed_profile, "gaussian | tent | poly | all");

    auto* cmd_presets = app.add_subcommand("presets", "list shipped scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            nlrd::Scenario s = resolve_scenario(scenario_ref);
            nlrd::ExecuteOptions opt;
            opt.out_override = out_dir;
            opt.cstar_file = cstar_file;
            const nlrd::RunManifest man = nlrd::execute(s, opt);
            print_manifest(man);
            return man.exit_code;
        }
        if (cmd_sweep->parsed()) {
            nlrd::Scenario s = resolve_scenario(scenario_ref);
            const std::string root = out_dir.empty() ? s.out_dir + "_sweep" : out_dir;
            const nlrd::SweepResult res = nlrd::sweep(s, axis, values, workers, root);
            int worst = nlrd::kExitOk;
            for (const auto& m : res.manifests) {
                std::cout << m.scenario << ": " << m.outcome << "\n";
                worst = std::max(worst, m.exit_code == nlrd::kExitBlowupAsExpected
                                            ? nlrd::kExitOk
                                            : m.exit_code);
            }
            std::cout << "summary: " << res.summary_csv_path << "\n";
            return worst;
        }
        if (cmd_cstar->parsed()) {
            auto grid = std::make_shared<const nlrd::RadialGrid>(
                nlrd::build_grid(dim, radius, count));
            nlrd::OptimizerSettings settings;
            if (seed_profile != "all") settings.seeds = {seed_profile};
            const nlrd::GnsEstimate est = nlrd::estimate_cstar(grid, settings);
            const std::string json = nlrd::estimate_to_json(est);
            std::cout << json << "\n";
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                std::ofstream out(out_dir + "/estimate.json");
                out << json << "\n";
                nlrd::write_snapshot_file(est.profile, 0.0, out_dir + "/cstar_profile.dat");
            }
            return 0;
        }
        if (cmd_presets->parsed()) {
            for (const auto& name : nlrd::preset_names())
                std::cout << name << "\n    " << nlrd::preset_description(name) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nlrd::kExitError;
    }
    return 0;
}
