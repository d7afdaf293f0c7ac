// Command-line front end: single runs, controller comparisons, and
// collocation-node convergence sweeps, all driven by config files.

#include <CLI11.hpp>

#include "vpbgk/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Collisional kinetic plasma simulation with robust magnetic feedback control"};
    app.require_subcommand(1);

    vpbgk::RunPlan plan;
    std::uint64_t seed_value = 0;
    std::string out_value;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", plan.config_path, "scenario config file")->required();
        cmd->add_option("--set", plan.overrides, "override a config key (key=value)")
            ->take_all();
        cmd->add_option("--out", out_value, "output directory (overrides output.dir)");
        cmd->add_option("--seed", seed_value, "master seed (overrides seed)");
        return cmd;
    };

    CLI::App* run = add_common(app.add_subcommand("run", "execute a single simulation"));
    CLI::App* sweep =
        add_common(app.add_subcommand("sweep-nz", "collocation-node convergence sweep"));
    CLI::App* compare =
        add_common(app.add_subcommand("compare-control", "run controller variants side by side"));

    CLI11_PARSE(app, argc, argv);

    CLI::App* active = run;
    plan.command = vpbgk::Command::Run;
    if (sweep->parsed()) {
        active = sweep;
        plan.command = vpbgk::Command::SweepNz;
    } else if (compare->parsed()) {
        active = compare;
        plan.command = vpbgk::Command::CompareControl;
    }
    if (active->count("--out")) plan.out_dir = out_value;
    if (active->count("--seed")) plan.seed = seed_value;

    return vpbgk::execute(plan);
}
