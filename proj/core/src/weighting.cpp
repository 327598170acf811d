#include "ftd/weighting.hpp"

#include "ftd/numeric.hpp"
#include "ftd/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ftd
{
    void check_aligned(const TriangleIndex &ti, const Weighting &sigma)
    {
        if (sigma.size() != ti.size())
            throw InvalidInput("weighting has " + std::to_string(sigma.size()) + " entries but the graph has " + std::to_string(ti.size()) + " triangles");
    }

    Weighting uniform_weighting(const Graph &g, const TriangleIndex &ti)
    {
        if (ti.empty()) {
            if (g.num_edges() > 0)
                throw NoTriangles("graph has edges but no triangles");
            return {};
        }
        // One division of exact integers, so K_n gets exactly the rounded value of 1/(n-2).
        double value = static_cast<double>(g.num_edges()) / (3.0 * static_cast<double>(ti.size()));
        return Weighting(ti.size(), value);
    }

    double vertex_weight(const TriangleIndex &ti, const Weighting &sigma, Vertex v)
    {
        CompensatedSum s;
        for (TriangleId t : ti.vertex_triangles(v))
            s += sigma[static_cast<std::size_t>(t)];
        return s.value();
    }

    double vertex_defect(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, Vertex v)
    {
        if (v < 0 || v >= g.num_vertices())
            throw InvalidInput("vertex " + std::to_string(v) + " out of range");
        check_aligned(ti, sigma);
        return vertex_weight(ti, sigma, v) - 0.5 * g.degree(v);
    }

    std::vector<double> vertex_defects(const Graph &g, const TriangleIndex &ti, const Weighting &sigma)
    {
        check_aligned(ti, sigma);
        std::vector<double> out(static_cast<std::size_t>(g.num_vertices()));
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            out[static_cast<std::size_t>(v)] = vertex_weight(ti, sigma, v) - 0.5 * g.degree(v);
        return out;
    }

    double edge_weight(const TriangleIndex &ti, const Weighting &sigma, EdgeId e)
    {
        CompensatedSum s;
        for (TriangleId t : ti.edge_triangles(e))
            s += sigma[static_cast<std::size_t>(t)];
        return s.value();
    }

    double edge_discrepancy(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, Edge e)
    {
        check_aligned(ti, sigma);
        return edge_weight(ti, sigma, g.require_edge(e)) - 1.0;
    }

    std::vector<double> edge_discrepancies(const TriangleIndex &ti, const Weighting &sigma)
    {
        check_aligned(ti, sigma);
        std::vector<double> out(static_cast<std::size_t>(ti.num_edges()));
        for (EdgeId e = 0; e < ti.num_edges(); ++e)
            out[static_cast<std::size_t>(e)] = edge_weight(ti, sigma, e) - 1.0;
        return out;
    }

    DiscrepancyReport report(const Graph &g, const TriangleIndex &ti, const Weighting &sigma)
    {
        check_aligned(ti, sigma);
        DiscrepancyReport r;

        CompensatedSum total;
        r.min_weight = sigma.size() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        for (double x : sigma.values) {
            total += x;
            r.min_weight = std::min(r.min_weight, x);
        }
        r.total_weight = total.value();

        CompensatedSum disc;
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
            double d = edge_weight(ti, sigma, e) - 1.0;
            disc += d;
            r.delta_inf = std::max(r.delta_inf, std::abs(d));
        }
        r.sum_edge_disc = disc.value();

        for (Vertex v = 0; v < g.num_vertices(); ++v)
            r.max_vertex_defect = std::max(r.max_vertex_defect, std::abs(vertex_weight(ti, sigma, v) - 0.5 * g.degree(v)));
        return r;
    }

    bool is_ftd(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, double tol)
    {
        if (sigma.size() != ti.size())
            return false;
        if (! uncovered_edges(g, ti).empty())
            return false;
        auto r = report(g, ti, sigma);
        return r.min_weight >= -tol && r.delta_inf <= tol;
    }

    void write_weighting(std::ostream &out, const TriangleIndex &ti, const Weighting &sigma, const std::vector<std::string> &comments)
    {
        check_aligned(ti, sigma);
        for (const auto &c : comments)
            out << "# " << c << '\n';
        out << ti.num_vertices() << ' ' << ti.size() << '\n';
        char buf[64];
        for (std::size_t t = 0; t < ti.size(); ++t) {
            const Triangle &tr = ti.triangles()[t];
            std::snprintf(buf, sizeof buf, "%.17g", sigma[t]);
            out << tr.u << ' ' << tr.v << ' ' << tr.w << ' ' << buf << '\n';
        }
    }

    Weighting read_weighting(std::istream &in, const TriangleIndex &ti)
    {
        LineReader reader(in);
        auto header = reader.expect_fields(2, "header \"n t\"");
        auto n = parse_int<Vertex>(header[0], reader.line_number());
        auto t = parse_int<std::int64_t>(header[1], reader.line_number());
        if (n != ti.num_vertices() || t != static_cast<std::int64_t>(ti.size()))
            throw InvalidInput("weighting is for n = " + std::to_string(n) + " with " + std::to_string(t) + " triangles, but the graph has n = " +
                               std::to_string(ti.num_vertices()) + " with " + std::to_string(ti.size()) + " triangles");

        Weighting sigma(ti.size());
        std::vector<char> seen(ti.size(), 0);
        for (std::int64_t i = 0; i < t; ++i) {
            auto f = reader.expect_fields(4, "\"u v w value\"");
            auto line = reader.line_number();
            auto id = ti.find(parse_int<Vertex>(f[0], line), parse_int<Vertex>(f[1], line), parse_int<Vertex>(f[2], line));
            if (! id)
                throw InvalidInput("line " + std::to_string(line) + ": " + f[0] + " " + f[1] + " " + f[2] + " is not a triangle of the graph");
            if (seen[static_cast<std::size_t>(*id)]++)
                throw InvalidInput("line " + std::to_string(line) + ": duplicate triangle");
            double value = parse_double(f[3], line);
            if (! std::isfinite(value))
                throw ParseError("line " + std::to_string(line) + ": weight must be finite");
            sigma[static_cast<std::size_t>(*id)] = value;
        }
        if (reader.next())
            throw ParseError("line " + std::to_string(reader.line_number()) + ": trailing data");
        return sigma;
    }
}
