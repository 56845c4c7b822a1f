// Batch experiment runner: scenario subcommands bind the solver, estimator,
// planner and diagnostics to config files and reproducible artifacts.

#include <cstdio>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lcl/scenarios.hpp"
#include "lcl/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lcl - Lagrangian chaos laboratory for the randomly forced "
                 "2D Navier-Stokes system"};
    app.set_version_flag("--version", std::string("lcl ") + lcl::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;

    const char* scenario_names[] = {"simulate", "lyapunov", "steer",
                                    "mixing",   "gramian",  "saturate"};
    std::map<std::string, CLI::Option*> seed_opts;
    for (const char* name : scenario_names) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name +
                                                 " scenario");
        sub->add_option("--config", config_path, "config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        seed_opts[name] = sub->add_option("--seed", seed, "override the config seed");
    }

    auto* replay = app.add_subcommand("replay", "re-run a manifest and diff");
    std::string manifest_path;
    std::string replay_out;
    std::uint64_t replay_seed = 0;
    replay->add_option("manifest", manifest_path, "manifest.json path")
        ->required();
    replay->add_option("--out", replay_out, "replay work directory");
    auto* rseed = replay->add_option("--seed", replay_seed, "override seed");

    CLI11_PARSE(app, argc, argv);

    try {
        for (const char* name : scenario_names) {
            if (!app.got_subcommand(name)) continue;
            lcl::Config cfg = lcl::Config::parse_file(config_path);
            std::uint64_t run_seed =
                seed_opts[name]->count() > 0 ? seed : cfg.get_u64("seed", 1);
            lcl::Manifest m = lcl::run_with_manifest(name, cfg, out_dir, run_seed);
            std::printf("%s: wrote %zu artifact(s) to %s (seed %llu, %.2fs)\n",
                        name, m.outputs.size(), out_dir.c_str(),
                        static_cast<unsigned long long>(run_seed),
                        m.wall_seconds);
            return lcl::kExitOk;
        }

        if (app.got_subcommand("replay")) {
            std::optional<std::uint64_t> seed_override;
            if (rseed->count() > 0) seed_override = replay_seed;
            lcl::ReplayReport rep =
                lcl::replay_manifest(manifest_path, replay_out, seed_override);
            if (rep.status == lcl::ReplayReport::Status::Identical) {
                std::printf("replay: byte-identical\n");
                return lcl::kExitOk;
            }
            for (const auto& d : rep.differing)
                std::printf("replay: %s (%s)\n", d.path.c_str(), d.reason.c_str());
            if (rep.status == lcl::ReplayReport::Status::DiffExpected) {
                std::printf("replay: differences expected (seed changed)\n");
                return lcl::kExitOk;
            }
            std::printf("replay: unexpected differences\n");
            return 1;
        }
    } catch (const lcl::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
