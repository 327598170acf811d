#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ftd
{
    enum class PlotKind
    {
        scan,
        trajectory,
    };

    PlotKind parse_plot_kind(const std::string &s);

    /// Comma-separated table with a header row; '#' lines and blank lines are skipped.
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;
        std::vector<std::size_t> row_lines;

        /// Index of a named column; throws ParseError naming the missing column.
        std::size_t column(const std::string &name) const;
        /// Numeric cell; throws ParseError with the source line number.
        double number(std::size_t row, std::size_t col) const;
    };

    /// Throws ParseError on ragged rows, with the line number.
    CsvTable read_csv(std::istream &in);

    /// Scan: stacked uncovered/ftd/anomaly fractions, one bar per c.
    std::string render_scan_svg(const CsvTable &table);
    /// Trajectory: log10 delta_inf against iteration, one polyline per seed when a seed column is present.
    std::string render_trajectory_svg(const CsvTable &table);

    /// Reads csv, renders, and only then writes out, so malformed or empty input leaves no file behind.
    void emit_plot(const std::filesystem::path &csv, PlotKind kind, const std::filesystem::path &out);
}
