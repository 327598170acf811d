#pragma once

#include "ftd/graph.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ftd
{
    /// Real weights on triangles, aligned with TriangleIndex ids.
    struct Weighting
    {
        std::vector<double> values;

        Weighting() = default;
        explicit Weighting(std::size_t size, double value = 0.0) : values(size, value) {}
        explicit Weighting(std::vector<double> v) : values(std::move(v)) {}

        std::size_t size() const { return values.size(); }
        double &operator[](std::size_t t) { return values[t]; }
        double operator[](std::size_t t) const { return values[t]; }
    };

    struct DiscrepancyReport
    {
        double delta_inf = 0.0;
        double max_vertex_defect = 0.0;
        double total_weight = 0.0;
        double min_weight = 0.0;
        double sum_edge_disc = 0.0;
    };

    /// Every triangle gets e(G) / (3 |T(G)|). Throws NoTriangles if G has edges but no triangles.
    Weighting uniform_weighting(const Graph &g, const TriangleIndex &ti);

    /// sigma(v): total weight of the triangles at v.
    double vertex_weight(const TriangleIndex &ti, const Weighting &sigma, Vertex v);
    /// sigma(v) - deg(v) / 2.
    double vertex_defect(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, Vertex v);
    std::vector<double> vertex_defects(const Graph &g, const TriangleIndex &ti, const Weighting &sigma);

    /// sigma(e): total weight of the triangles on edge id e.
    double edge_weight(const TriangleIndex &ti, const Weighting &sigma, EdgeId e);
    /// sigma(e) - 1. Throws InvalidEdge if e is not in G.
    double edge_discrepancy(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, Edge e);
    /// sigma(e) - 1 for every edge id.
    std::vector<double> edge_discrepancies(const TriangleIndex &ti, const Weighting &sigma);

    DiscrepancyReport report(const Graph &g, const TriangleIndex &ti, const Weighting &sigma);

    /// Non-negative within tol, every edge discrepancy within tol, and every edge in a triangle.
    bool is_ftd(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, double tol);

    /// Throws InvalidInput unless sigma has one entry per triangle.
    void check_aligned(const TriangleIndex &ti, const Weighting &sigma);

    // Text format: "n t", then t lines "u v w value" in triangle-id order, values with 17 significant digits.
    void write_weighting(std::ostream &out, const TriangleIndex &ti, const Weighting &sigma, const std::vector<std::string> &comments = {});
    /// Throws ParseError on malformed input and InvalidInput if the file does not match the triangles of ti.
    Weighting read_weighting(std::istream &in, const TriangleIndex &ti);
}
