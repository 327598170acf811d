#include "ftd/plot.hpp"

#include "ftd/common.hpp"
#include "ftd/text_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace ftd
{
    namespace
    {
        constexpr double width = 640.0;
        constexpr double height = 400.0;
        constexpr double left = 70.0;
        constexpr double right = 130.0;
        constexpr double top = 30.0;
        constexpr double bottom = 50.0;

        std::string num(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", x);
            return buf;
        }

        std::string short_num(double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4g", x);
            return buf;
        }

        std::vector<std::string> split_csv(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cell;
            bool quoted = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                char ch = line[i];
                if (quoted) {
                    if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                        cell += '"';
                        ++i;
                    }
                    else if (ch == '"')
                        quoted = false;
                    else
                        cell += ch;
                }
                else if (ch == '"')
                    quoted = true;
                else if (ch == ',') {
                    out.push_back(cell);
                    cell.clear();
                }
                else if (ch != '\r')
                    cell += ch;
            }
            out.push_back(cell);
            return out;
        }

        std::string svg_open()
        {
            return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(width) + " " +
                   num(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        }

        std::string text(double x, double y, const std::string &s, const std::string &anchor = "middle")
        {
            return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
        }

        std::string axes(const std::string &xlabel, const std::string &ylabel)
        {
            double x1 = width - right, y1 = height - bottom;
            std::string s = "<path d=\"M" + num(left) + " " + num(top) + " L" + num(left) + " " + num(y1) + " L" + num(x1) + " " + num(y1) +
                            "\" fill=\"none\" stroke=\"black\"/>\n";
            s += text((left + x1) / 2, height - 12, xlabel);
            s += "<text x=\"16\" y=\"" + num((top + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num((top + y1) / 2) + ")\">" + ylabel +
                 "</text>\n";
            return s;
        }
    }

    PlotKind parse_plot_kind(const std::string &s)
    {
        if (s == "scan")
            return PlotKind::scan;
        if (s == "trajectory")
            return PlotKind::trajectory;
        throw InvalidInput("unknown plot kind \"" + s + "\" (expected scan or trajectory)");
    }

    std::size_t CsvTable::column(const std::string &name) const
    {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw ParseError("missing column \"" + name + "\"");
        return static_cast<std::size_t>(it - header.begin());
    }

    double CsvTable::number(std::size_t row, std::size_t col) const
    {
        return parse_double(rows[row][col], row_lines[row]);
    }

    CsvTable read_csv(std::istream &in)
    {
        CsvTable t;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#')
                continue;
            auto cells = split_csv(line);
            if (t.header.empty()) {
                t.header = cells;
                continue;
            }
            if (cells.size() != t.header.size())
                throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()));
            t.rows.push_back(std::move(cells));
            t.row_lines.push_back(line_no);
        }
        return t;
    }

    std::string render_scan_svg(const CsvTable &table)
    {
        if (table.rows.empty())
            throw InvalidInput("scan CSV has no data rows");
        auto c_col = table.column("c"), trials_col = table.column("trials");
        std::array<std::size_t, 3> parts{table.column("uncovered"), table.column("ftd"), table.column("anomaly")};
        const std::array<const char *, 3> names{"uncovered", "FTD", "anomaly"};
        const std::array<const char *, 3> colours{"#9e9e9e", "#2e7d32", "#c62828"};

        double plot_w = width - left - right, plot_h = height - top - bottom;
        double slot = plot_w / static_cast<double>(table.rows.size());
        double bar = std::min(60.0, slot * 0.7);
        std::string s = svg_open() + axes("c (p = c p_Delta)", "fraction of trials");
        for (int k = 0; k <= 4; ++k) {
            double y = top + plot_h * (1.0 - k / 4.0);
            s += "<line x1=\"" + num(left - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) + "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
            s += text(left - 8, y + 4, short_num(k / 4.0), "end");
        }
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            double trials = table.number(r, trials_col);
            if (! (trials > 0))
                throw ParseError("line " + std::to_string(table.row_lines[r]) + ": trials must be positive");
            double x = left + slot * (static_cast<double>(r) + 0.5) - bar / 2;
            double base = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                double f = table.number(r, parts[k]) / trials;
                double y = top + plot_h * (1.0 - base - f);
                s += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(bar) + "\" height=\"" + num(plot_h * f) + "\" fill=\"" + colours[k] + "\"/>\n";
                base += f;
            }
            s += text(x + bar / 2, height - bottom + 16, table.rows[r][c_col]);
        }
        for (std::size_t k = 0; k < 3; ++k) {
            double y = top + 20.0 * static_cast<double>(k);
            s += "<rect x=\"" + num(width - right + 15) + "\" y=\"" + num(y) + "\" width=\"12\" height=\"12\" fill=\"" + colours[k] + "\"/>\n";
            s += text(width - right + 33, y + 10, names[k], "start");
        }
        return s + "</svg>\n";
    }

    std::string render_trajectory_svg(const CsvTable &table)
    {
        if (table.rows.empty())
            throw InvalidInput("trajectory CSV has no data rows");
        auto iter_col = table.column("iter"), delta_col = table.column("delta_inf");
        auto seed_it = std::find(table.header.begin(), table.header.end(), "seed");
        bool has_seed = seed_it != table.header.end();
        auto seed_col = static_cast<std::size_t>(seed_it - table.header.begin());

        // Zero discrepancy has no logarithm; it is drawn on a floor just under double precision.
        const double floor_log = -17.0;
        std::map<std::string, std::vector<std::pair<double, double>>> series;
        std::vector<std::string> order;
        double max_iter = 0.0, lo = 0.0, hi = -300.0;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            double it = table.number(r, iter_col);
            double d = table.number(r, delta_col);
            if (d < 0)
                throw ParseError("line " + std::to_string(table.row_lines[r]) + ": delta_inf must be non-negative");
            double ld = d > 0 ? std::max(std::log10(d), floor_log) : floor_log;
            std::string key = has_seed ? table.rows[r][seed_col] : "";
            if (! series.count(key))
                order.push_back(key);
            series[key].emplace_back(it, ld);
            max_iter = std::max(max_iter, it);
            lo = std::min(lo, ld);
            hi = std::max(hi, ld);
        }
        double ymin = std::floor(lo), ymax = std::max(std::ceil(hi), ymin + 1);
        double plot_w = width - left - right, plot_h = height - top - bottom;
        double xmax = std::max(1.0, max_iter);
        auto px = [&](double it) { return left + plot_w * it / xmax; };
        auto py = [&](double ld) { return top + plot_h * (ymax - ld) / (ymax - ymin); };

        std::string s = svg_open() + axes("iteration", "log10 delta_inf");
        int step = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 8)));
        for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += step) {
            double y = py(e);
            s += "<line x1=\"" + num(left - 4) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left) + "\" y2=\"" + num(y) + "\" stroke=\"black\"/>\n";
            s += text(left - 8, y + 4, "1e" + std::to_string(e), "end");
        }
        for (int k = 0; k <= 4; ++k) {
            double it = xmax * k / 4.0;
            s += text(px(it), height - bottom + 16, short_num(std::round(it * 10) / 10));
        }
        const std::array<const char *, 6> colours{"#1565c0", "#c62828", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f"};
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto &pts = series[order[k]];
            std::string d;
            for (const auto &[it, ld] : pts)
                d += (d.empty() ? "" : " ") + num(px(it)) + "," + num(py(ld));
            const char *colour = colours[k % colours.size()];
            s += "<polyline points=\"" + d + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"/>\n";
            if (has_seed && k < 12) {
                double y = top + 18.0 * static_cast<double>(k);
                s += "<line x1=\"" + num(width - right + 15) + "\" y1=\"" + num(y + 6) + "\" x2=\"" + num(width - right + 35) + "\" y2=\"" + num(y + 6) +
                     "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
                s += text(width - right + 40, y + 10, "seed " + order[k], "start");
            }
        }
        return s + "</svg>\n";
    }

    void emit_plot(const std::filesystem::path &csv, PlotKind kind, const std::filesystem::path &out)
    {
        std::ifstream in(csv);
        if (! in)
            throw InvalidInput("cannot open " + csv.string());
        CsvTable table;
        std::string svg;
        try {
            table = read_csv(in);
            svg = kind == PlotKind::scan ? render_scan_svg(table) : render_trajectory_svg(table);
        }
        catch (const ParseError &e) {
            throw ParseError(csv.string() + ": " + e.what());
        }
        std::ofstream o(out);
        if (! o)
            throw InvalidInput("cannot write " + out.string());
        o << svg;
    }
}
