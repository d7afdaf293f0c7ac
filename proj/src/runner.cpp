#include "vpbgk/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

#include "vpbgk/collocation.hpp"
#include "vpbgk/ensemble.hpp"
#include "vpbgk/errors.hpp"
#include "vpbgk/writers.hpp"

namespace fs = std::filesystem;

namespace vpbgk {

namespace {

std::string snapshot_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", t);
    return buf;
}

void write_snapshots_at(const EnsembleSimulation& sim, const std::string& dir, double t) {
    const std::string tag = snapshot_tag(t);
    write_snapshot(dir + "/snapshot_density_mean_" + tag + ".csv", sim.mesh(), sim.mean_density());
    write_snapshot(dir + "/snapshot_density_var_" + tag + ".csv", sim.mesh(),
                   sim.variance_density());
    write_snapshot(dir + "/snapshot_temperature_mean_" + tag + ".csv", sim.mesh(),
                   sim.mean_temperature());
}

} // namespace

RunResult run_single(const ScenarioConfig& cfg, bool write_outputs) {
    const std::string dir = cfg.output.dir;
    if (write_outputs) fs::create_directories(dir);

    EnsembleSimulation sim(cfg);
    sim.initialize();
    const long n_steps = cfg.step_count();

    // Map requested snapshot times onto step indices.
    std::set<long> snapshot_steps;
    if (write_outputs && cfg.output.write_snapshots)
        for (double t : cfg.output.snapshot_times) {
            const long s = std::clamp(std::lround(t / cfg.h), 0L, n_steps);
            snapshot_steps.insert(s);
        }

    RunResult result;
    const auto& weights = sim.collocation().weights;
    const auto& zs = sim.collocation().nodes;

    std::vector<std::vector<double>> ts_rows;      // per node per step
    std::vector<std::vector<double>> ts_mean_rows; // aggregated
    std::vector<std::vector<double>> control_rows;

    auto record_stats = [&](double t, const std::vector<BoundaryStats>& per_node) {
        std::vector<double> e(per_node.size()), temp(per_node.size()), rho(per_node.size());
        for (std::size_t k = 0; k < per_node.size(); ++k) {
            e[k] = per_node[k].energy;
            temp[k] = per_node[k].temp;
            rho[k] = per_node[k].rho_b;
            ts_rows.push_back({t, static_cast<double>(k), zs[k], per_node[k].rho_b,
                               per_node[k].ub_x, per_node[k].ub_y, per_node[k].energy,
                               per_node[k].temp});
        }
        CollocationSet set{zs, weights};
        const double e_mean = estimate_expectation(e, set);
        const double e_std = std::sqrt(std::max(0.0, estimate_variance(e, set)));
        const double t_mean = estimate_expectation(temp, set);
        const double t_std = std::sqrt(std::max(0.0, estimate_variance(temp, set)));
        const double r_mean = estimate_expectation(rho, set);
        const double r_std = std::sqrt(std::max(0.0, estimate_variance(rho, set)));
        ts_mean_rows.push_back({t, e_mean, e_std, t_mean, t_std, r_mean, r_std});
        result.times.push_back(t);
        result.energy_mean.push_back(e_mean);
        result.energy_std.push_back(e_std);
        result.temp_mean.push_back(t_mean);
    };

    for (long s = 0; s < n_steps; ++s) {
        if (write_outputs && snapshot_steps.count(s))
            write_snapshots_at(sim, dir, sim.time());
        StepRecord rec = sim.step();
        record_stats(rec.t, rec.per_node);
        result.cfl_warnings += rec.cfl_warnings;
        std::vector<double> row{rec.t};
        row.insert(row.end(), rec.control_values.begin(), rec.control_values.end());
        row.push_back(rec.op == StatOperatorKind::WorstCase ? 1.0 : 0.0);
        row.push_back(static_cast<double>(rec.z0));
        control_rows.push_back(std::move(row));
        result.control_trace.push_back(rec.control_values);
    }
    // Final-time record (state after the last push).
    record_stats(sim.time(), sim.current_boundary_stats());
    result.final_time = sim.time();
    result.final_mean_density = sim.mean_density();

    if (write_outputs) {
        write_csv(dir + "/timeseries.csv",
                  {"t", "node", "z", "rho_b", "ub_x", "ub_y", "energy_b", "temp_b"}, ts_rows);
        write_csv(dir + "/timeseries_mean.csv",
                  {"t", "energy_mean", "energy_std", "temp_mean", "temp_std", "rho_mean",
                   "rho_std"},
                  ts_mean_rows);
        std::vector<std::string> control_header{"t"};
        for (int k = 0; k < cfg.control.n_cells; ++k)
            control_header.push_back("b_" + std::to_string(k + 1));
        control_header.push_back("worst_case");
        control_header.push_back("z0");
        write_csv(dir + "/control_trace.csv", control_header, control_rows);
        if (cfg.output.write_snapshots && snapshot_steps.count(n_steps))
            write_snapshots_at(sim, dir, sim.time());
        if (cfg.output.write_moments) {
            const MomentGrids m = reconstruct_moments_grid(sim.particles(0), sim.mesh(),
                                                           cfg.domain, cfg.threads);
            write_moments(dir + "/moments_node0_final.csv", sim.mesh(), m);
        }
        write_text_file(dir + "/config_used.ini", to_ini(cfg));
        emit_plot_script(dir, PlotKind::Run);
        if (result.cfl_warnings > 0)
            std::cerr << "warning: " << result.cfl_warnings
                      << " particle steps exceeded one domain length\n";
    }
    return result;
}

SweepResult run_sweep(const ScenarioConfig& cfg, bool write_outputs) {
    SweepResult out;
    out.members = cfg.sweep.members;
    if (out.members.empty()) throw ConfigError("sweep: empty member list");
    for (int m : out.members)
        if (m < 1) throw ConfigError("sweep: member node counts must be >= 1");
    const int max_member = *std::max_element(out.members.begin(), out.members.end());
    if (cfg.sweep.ref < max_member)
        throw ConfigError("sweep: reference node count must not be smaller than members");

    auto member_cfg = [&](int n_z) {
        ScenarioConfig c = cfg;
        c.n_z = n_z;
        c.fixed_z.reset();
        c.t_final = cfg.sweep.t_final;
        c.output.write_snapshots = false;
        return c;
    };

    auto run_density = [&](int n_z, double& seconds) {
        const auto t0 = std::chrono::steady_clock::now();
        const RunResult r = run_single(member_cfg(n_z), false);
        seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r.final_mean_density;
    };

    double ref_seconds = 0.0;
    const Grid ref = run_density(cfg.sweep.ref, ref_seconds);
    for (int m : out.members) {
        double seconds = 0.0;
        const Grid mean = run_density(m, seconds);
        out.errors.push_back(collocation_error(ref, mean));
        out.wall_seconds.push_back(seconds);
    }

    if (write_outputs) {
        const std::string dir = cfg.output.dir;
        fs::create_directories(dir);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < out.members.size(); ++i)
            rows.push_back({static_cast<double>(out.members[i]), out.errors[i]});
        write_csv(dir + "/sweep.csv", {"n_z", "err"}, rows);
        // Wall times are informative only and excluded from the deterministic
        // CSV artifacts.
        std::string timing = "ref(" + std::to_string(cfg.sweep.ref) +
                             "): " + std::to_string(ref_seconds) + " s\n";
        for (std::size_t i = 0; i < out.members.size(); ++i)
            timing += "n_z " + std::to_string(out.members[i]) + ": " +
                      std::to_string(out.wall_seconds[i]) + " s\n";
        write_text_file(dir + "/timing.txt", timing);
        write_text_file(dir + "/config_used.ini", to_ini(cfg));
        emit_plot_script(dir, PlotKind::Sweep);
    }
    return out;
}

ScenarioConfig apply_variant(const ScenarioConfig& base, const std::string& token) {
    ScenarioConfig c = base;
    if (token == "worst-case")
        c.control.op = StatOperatorKind::WorstCase;
    else if (token == "expectation")
        c.control.op = StatOperatorKind::Expectation;
    else if (token == "pointwise-limit")
        c.control.method = ControlMethod::PointwiseLimit;
    else if (token == "pointwise-discrete")
        c.control.method = ControlMethod::PointwiseDiscrete;
    else if (token == "cellwise")
        c.control.method = ControlMethod::Cellwise;
    else if (token == "fixed")
        c.control.method = ControlMethod::Fixed;
    else
        throw ConfigError("compare: unknown variant '" + token + "'");
    return c;
}

CompareResult run_compare(const ScenarioConfig& cfg, bool write_outputs) {
    if (cfg.compare.variants.empty()) throw ConfigError("compare: empty variant list");
    CompareResult out;
    out.variants = cfg.compare.variants;
    for (const auto& token : cfg.compare.variants) {
        ScenarioConfig c = apply_variant(cfg, token);
        c.output.write_snapshots = false;
        const RunResult r = run_single(c, false);
        if (out.times.empty()) out.times = r.times;
        out.energy_mean.push_back(r.energy_mean);
    }

    if (write_outputs) {
        const std::string dir = cfg.output.dir;
        fs::create_directories(dir);
        std::vector<std::string> header{"t"};
        for (const auto& v : out.variants) header.push_back(v);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < out.times.size(); ++i) {
            std::vector<double> row{out.times[i]};
            for (const auto& series : out.energy_mean) row.push_back(series[i]);
            rows.push_back(std::move(row));
        }
        write_csv(dir + "/compare_energy.csv", header, rows);
        write_text_file(dir + "/config_used.ini", to_ini(cfg));
        emit_plot_script(dir, PlotKind::Compare);
    }
    return out;
}

int execute(const RunPlan& plan) {
    try {
        std::vector<std::string> overrides = plan.overrides;
        if (plan.seed) overrides.push_back("seed=" + std::to_string(*plan.seed));
        if (plan.out_dir) overrides.push_back("output.dir=" + *plan.out_dir);
        const ScenarioConfig cfg = load_config(plan.config_path, overrides);
        switch (plan.command) {
        case Command::Run: {
            const RunResult r = run_single(cfg);
            std::cout << "run complete: t_final=" << r.final_time
                      << " steps=" << (r.times.size() - 1)
                      << " final mean boundary energy=" << r.energy_mean.back() << "\n";
            break;
        }
        case Command::SweepNz: {
            const SweepResult r = run_sweep(cfg);
            for (std::size_t i = 0; i < r.members.size(); ++i)
                std::cout << "n_z=" << r.members[i] << " err=" << r.errors[i] << "\n";
            break;
        }
        case Command::CompareControl: {
            const CompareResult r = run_compare(cfg);
            for (std::size_t v = 0; v < r.variants.size(); ++v)
                std::cout << r.variants[v]
                          << ": final mean boundary energy=" << r.energy_mean[v].back() << "\n";
            break;
        }
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace vpbgk
