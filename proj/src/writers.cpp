#include "vpbgk/writers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "vpbgk/errors.hpp"

namespace fs = std::filesystem;

namespace vpbgk {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary); // binary: '\n' endings everywhere
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void write_header(std::ofstream& out, const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    write_header(out, header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw InternalError("write_csv: row width does not match header: " + path);
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_snapshot(const std::string& path, const Mesh& mesh, const Grid& values) {
    if (values.size() != mesh.cell_count())
        throw InternalError("write_snapshot: grid size mismatch: " + path);
    auto out = open_out(path);
    out << "x_center,y_center,value\n";
    for (int j = 0; j < mesh.my; ++j)
        for (int i = 0; i < mesh.mx; ++i)
            out << format_number(mesh.x_center(i)) << ',' << format_number(mesh.y_center(j))
                << ',' << format_number(values[mesh.index(i, j)]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_moments(const std::string& path, const Mesh& mesh, const MomentGrids& m) {
    auto out = open_out(path);
    out << "x_center,y_center,rho,ux,uy,temperature\n";
    for (int j = 0; j < mesh.my; ++j)
        for (int i = 0; i < mesh.mx; ++i) {
            const std::size_t c = mesh.index(i, j);
            out << format_number(mesh.x_center(i)) << ',' << format_number(mesh.y_center(j)) << ',';
            if (m.occupied[c]) {
                out << format_number(m.rho[c]) << ',' << format_number(m.ux[c]) << ','
                    << format_number(m.uy[c]) << ',' << format_number(m.temperature[c]);
            } else {
                out << ",,,"; // unoccupied: missing, not zero
            }
            out << '\n';
        }
    if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) table.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            row.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : std::stod(cell));
        }
        // A trailing empty field is swallowed by getline; pad to header width.
        while (row.size() < table.header.size())
            row.push_back(std::numeric_limits<double>::quiet_NaN());
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

const char* kPlotRun = R"PY(#!/usr/bin/env python3
"""Plots for a single run directory: density heatmaps with the control slab
values, x-slices of the mean density with std shading, boundary thermal
energy, and the control trace. Reads only CSV files in this directory."""
import csv
import glob
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read_csv(path):
    with open(path) as f:
        rows = list(csv.reader(f))
    header, data = rows[0], rows[1:]
    cols = {name: [] for name in header}
    for row in data:
        for name, cell in zip(header, row):
            cols[name].append(float(cell) if cell != "" else math.nan)
    return header, cols


def grid_from_snapshot(path):
    _, cols = read_csv(path)
    xs = sorted(set(cols["x_center"]))
    ys = sorted(set(cols["y_center"]))
    nx, ny = len(xs), len(ys)
    vals = [[math.nan] * nx for _ in range(ny)]
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: j for j, y in enumerate(ys)}
    for x, y, v in zip(cols["x_center"], cols["y_center"], cols["value"]):
        vals[yi[y]][xi[x]] = v
    return xs, ys, vals


def plot_heatmaps():
    snaps = sorted(glob.glob(os.path.join(HERE, "snapshot_density_mean_*.csv")))
    if not snaps:
        return
    fig, axes = plt.subplots(1, len(snaps), figsize=(4 * len(snaps), 3.4), squeeze=False)
    for ax, path in zip(axes[0], snaps):
        xs, ys, vals = grid_from_snapshot(path)
        im = ax.imshow(vals, origin="lower", aspect="auto",
                       extent=[xs[0], xs[-1], ys[0], ys[-1]])
        label = os.path.basename(path)[len("snapshot_density_mean_"):-len(".csv")]
        ax.set_title(f"mean density, t={label}")
        ax.set_xlabel("x"); ax.set_ylabel("y")
        fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "density_heatmaps.png"), dpi=150)
    plt.close(fig)


def plot_slices():
    means = sorted(glob.glob(os.path.join(HERE, "snapshot_density_mean_*.csv")))
    for mean_path in means:
        var_path = mean_path.replace("density_mean", "density_var")
        if not os.path.exists(var_path):
            continue
        xs, ys, mvals = grid_from_snapshot(mean_path)
        _, _, vvals = grid_from_snapshot(var_path)
        xi = min(range(len(xs)), key=lambda i: abs(xs[i] - 0.5 * (xs[0] + xs[-1])))
        mu = [row[xi] for row in mvals]
        sd = [math.sqrt(max(v[xi], 0.0)) for v in vvals]
        fig, ax = plt.subplots(figsize=(4.2, 3.2))
        ax.plot(ys, mu, color="tab:blue")
        ax.fill_between(ys, [m - s for m, s in zip(mu, sd)],
                        [m + s for m, s in zip(mu, sd)], alpha=0.3)
        label = os.path.basename(mean_path)[len("snapshot_density_mean_"):-len(".csv")]
        ax.set_title(f"density slice x={xs[xi]:.3g}, t={label}")
        ax.set_xlabel("y"); ax.set_ylabel("mean density")
        fig.tight_layout()
        fig.savefig(mean_path.replace(".csv", "_slice.png"), dpi=150)
        plt.close(fig)


def plot_energy():
    path = os.path.join(HERE, "timeseries_mean.csv")
    _, cols = read_csv(path)
    t = cols["t"]
    mu, sd = cols["energy_mean"], cols["energy_std"]
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    ax.plot(t, mu, color="tab:blue", label="mean")
    ax.fill_between(t, [m - s for m, s in zip(mu, sd)],
                    [m + s for m, s in zip(mu, sd)], alpha=0.3)
    ax.set_xlabel("t"); ax.set_ylabel("boundary thermal energy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "boundary_energy.png"), dpi=150)
    plt.close(fig)


def plot_control():
    path = os.path.join(HERE, "control_trace.csv")
    header, cols = read_csv(path)
    t = cols["t"]
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    for name in header:
        if name.startswith("b_"):
            ax.plot(t, cols[name], label=name)
    ax.set_xlabel("t"); ax.set_ylabel("control field value")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "control_trace.png"), dpi=150)
    plt.close(fig)


def main():
    plot_heatmaps()
    plot_slices()
    plot_energy()
    plot_control()
    print("wrote plots in", HERE)


if __name__ == "__main__":
    sys.exit(main())
)PY";

const char* kPlotSweep = R"PY(#!/usr/bin/env python3
"""Semilog collocation-error decay plot from sweep.csv."""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    with open(os.path.join(HERE, "sweep.csv")) as f:
        rows = list(csv.DictReader(f))
    nz = [int(float(r["n_z"])) for r in rows]
    err = [float(r["err"]) for r in rows]
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    ax.semilogy(nz, err, "o-")
    ax.set_xlabel("collocation nodes")
    ax.set_ylabel("max-norm error of mean density")
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "sweep_error.png"), dpi=150)
    print("wrote sweep_error.png in", HERE)


if __name__ == "__main__":
    sys.exit(main())
)PY";

const char* kPlotCompare = R"PY(#!/usr/bin/env python3
"""Boundary thermal energy curves for each compared controller variant."""
import csv
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def main():
    with open(os.path.join(HERE, "compare_energy.csv")) as f:
        rows = list(csv.reader(f))
    header, data = rows[0], rows[1:]
    t = [float(r[0]) for r in data]
    fig, ax = plt.subplots(figsize=(4.6, 3.2))
    for col in range(1, len(header)):
        ax.plot(t, [float(r[col]) for r in data], label=header[col])
    ax.set_xlabel("t"); ax.set_ylabel("mean boundary thermal energy")
    ax.legend()
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "compare_energy.png"), dpi=150)
    print("wrote compare_energy.png in", HERE)


if __name__ == "__main__":
    sys.exit(main())
)PY";

} // namespace

void emit_plot_script(const std::string& run_dir, PlotKind kind) {
    const fs::path dir(run_dir);
    std::vector<std::string> required;
    std::string name;
    const char* body = nullptr;
    switch (kind) {
    case PlotKind::Run:
        required = {"timeseries_mean.csv", "control_trace.csv"};
        name = "plot_run.py";
        body = kPlotRun;
        break;
    case PlotKind::Sweep:
        required = {"sweep.csv"};
        name = "plot_sweep.py";
        body = kPlotSweep;
        break;
    case PlotKind::Compare:
        required = {"compare_energy.csv"};
        name = "plot_compare.py";
        body = kPlotCompare;
        break;
    }
    std::string missing;
    for (const auto& f : required)
        if (!fs::exists(dir / f)) missing += (missing.empty() ? "" : ", ") + f;
    if (!missing.empty())
        throw std::runtime_error("emit_plot_script: missing inputs in " + run_dir + ": " + missing);
    write_text_file((dir / name).string(), body);
}

} // namespace vpbgk
