#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vpbgk/diagnostics.hpp"
#include "vpbgk/domain.hpp"

namespace vpbgk {

// All writers are deterministic byte-for-byte for a fixed run: fixed headers,
// fixed row order, "%.17g" number formatting, '\n' line endings.

std::string format_number(double v);

// Generic CSV with a header row; every row must match the header width.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Grid snapshot as (x_center, y_center, value), row-major (x fastest).
void write_snapshot(const std::string& path, const Mesh& mesh, const Grid& values);

// Moment grids with unoccupied cells emitted as empty fields (not zeros).
void write_moments(const std::string& path, const Mesh& mesh, const MomentGrids& moments);

// Minimal CSV reader (numbers; empty fields map to NaN). For tests/tools.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

enum class PlotKind { Run, Sweep, Compare };

// Emit a self-contained matplotlib script next to the run outputs. The
// script references only CSV files in the same directory. Missing required
// inputs raise an error naming every absent file. Re-emission writes
// identical content.
void emit_plot_script(const std::string& run_dir, PlotKind kind);

} // namespace vpbgk
