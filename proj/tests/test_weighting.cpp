#include "ftd/weighting.hpp"

#include <doctest.h>

#include <sstream>

using namespace ftd;

namespace
{
    Graph triangle() { return Graph::complete(3); }

    Graph triangle_with_tail()
    {
        std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}, {2, 3}};
        return Graph::from_edges(4, edges);
    }
}

TEST_CASE("uniform weighting")
{
    Graph k4 = Graph::complete(4);
    TriangleIndex t4(k4);
    auto u4 = uniform_weighting(k4, t4);
    for (double x : u4.values)
        CHECK(x == 0.5);
    for (EdgeId e = 0; e < 6; ++e)
        CHECK(edge_weight(t4, u4, e) == 1.0);

    Graph k5 = Graph::complete(5);
    TriangleIndex t5(k5);
    for (double x : uniform_weighting(k5, t5).values)
        CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    Graph c5 = Graph::cycle(5);
    CHECK_THROWS_AS(uniform_weighting(c5, TriangleIndex(c5)), NoTriangles);
    Graph empty(4);
    CHECK(uniform_weighting(empty, TriangleIndex(empty)).size() == 0);
}

TEST_CASE("vertex defects")
{
    Graph k4 = Graph::complete(4);
    TriangleIndex t4(k4);
    auto u4 = uniform_weighting(k4, t4);
    for (Vertex v = 0; v < 4; ++v)
        CHECK(vertex_defect(k4, t4, u4, v) == 0.0);

    Graph t = triangle();
    TriangleIndex ti(t);
    for (Vertex v = 0; v < 3; ++v) {
        CHECK(vertex_defect(t, ti, Weighting(1, 1.0), v) == 0.0);
        CHECK(vertex_defect(t, ti, Weighting(1, 0.0), v) == -1.0);
    }
}

TEST_CASE("edge discrepancy")
{
    Graph k4 = Graph::complete(4);
    TriangleIndex t4(k4);
    CHECK(edge_discrepancy(k4, t4, uniform_weighting(k4, t4), Edge(1, 3)) == 0.0);

    Graph t = triangle();
    TriangleIndex ti(t);
    CHECK(edge_discrepancy(t, ti, Weighting(1, 1.0), Edge(0, 1)) == 0.0);
    CHECK(edge_discrepancy(t, ti, Weighting(1, 0.0), Edge(0, 1)) == -1.0);
    CHECK_THROWS_AS(edge_discrepancy(k4, t4, uniform_weighting(k4, t4), Edge(0, 7)), InvalidEdge);
    CHECK_THROWS_AS(edge_discrepancy(t, ti, Weighting(2, 1.0), Edge(0, 1)), InvalidInput);
}

TEST_CASE("discrepancy reports")
{
    Graph k4 = Graph::complete(4);
    TriangleIndex t4(k4);
    auto r4 = report(k4, t4, uniform_weighting(k4, t4));
    CHECK(r4.delta_inf == 0.0);
    CHECK(r4.max_vertex_defect == 0.0);
    CHECK(r4.total_weight == 2.0);

    Graph t = triangle();
    TriangleIndex ti(t);
    auto one = report(t, ti, Weighting(1, 1.0));
    CHECK(one.total_weight == 1.0);
    CHECK(one.min_weight == 1.0);
    CHECK(one.delta_inf == 0.0);
    CHECK(report(t, ti, Weighting(1, 0.5)).delta_inf == 0.5);
}

TEST_CASE("is_ftd")
{
    Graph k4 = Graph::complete(4);
    TriangleIndex t4(k4);
    CHECK(is_ftd(k4, t4, uniform_weighting(k4, t4), 1e-12));
    Graph t = triangle();
    TriangleIndex ti(t);
    CHECK(is_ftd(t, ti, Weighting(1, 1.0), 0.0));
    CHECK_FALSE(is_ftd(t, ti, Weighting(1, 0.9), 1e-3));

    Graph tail = triangle_with_tail();
    TriangleIndex tt(tail);
    CHECK_FALSE(is_ftd(tail, tt, Weighting(1, 1.0), 1e-9));
    CHECK_FALSE(is_ftd(tail, tt, Weighting(1, 0.0), 10.0));
}

TEST_CASE("linearity and the vertex-balance identity")
{
    Graph g = gen_gnp(30, 0.4, 8);
    TriangleIndex ti(g);
    Weighting a(ti.size()), b(ti.size()), mix(ti.size());
    for (std::size_t t = 0; t < ti.size(); ++t) {
        a[t] = 0.1 * static_cast<double>(t % 7);
        b[t] = 0.3 - 0.05 * static_cast<double>(t % 5);
        mix[t] = 2.5 * a[t] - 1.5 * b[t];
    }
    auto da = edge_discrepancies(ti, a), db = edge_discrepancies(ti, b), dm = edge_discrepancies(ti, mix);
    for (std::size_t e = 0; e < dm.size(); ++e)
        CHECK(dm[e] + 1 == doctest::Approx(2.5 * (da[e] + 1) - 1.5 * (db[e] + 1)).epsilon(1e-12));

    // sum_e delta_e = 3 total - e(G); the uniform weighting has total e(G)/3 and zero total vertex defect.
    auto r = report(g, ti, a);
    CHECK(r.sum_edge_disc == doctest::Approx(3 * r.total_weight - static_cast<double>(g.num_edges())).epsilon(1e-12));
    auto u = uniform_weighting(g, ti);
    auto ru = report(g, ti, u);
    CHECK(ru.total_weight == doctest::Approx(static_cast<double>(g.num_edges()) / 3).epsilon(1e-14));
    double total_defect = 0.0;
    for (double d : vertex_defects(g, ti, u))
        total_defect += d;
    CHECK(std::abs(total_defect) <= 1e-9);
    CHECK(std::abs(ru.sum_edge_disc) <= 1e-9);
}

TEST_CASE("weighting text format")
{
    Graph g = gen_gnp(12, 0.6, 2);
    TriangleIndex ti(g);
    Weighting w(ti.size());
    for (std::size_t t = 0; t < ti.size(); ++t)
        w[t] = 1.0 / static_cast<double>(t + 3);
    std::stringstream ss;
    write_weighting(ss, ti, w, {"round trip"});
    auto r = read_weighting(ss, ti);
    CHECK(r.values == w.values);

    Graph k4 = Graph::complete(4);
    TriangleIndex t4(k4);
    std::istringstream wrong_count("4 3\n0 1 2 0.5\n0 1 3 0.5\n0 2 3 0.5\n");
    CHECK_THROWS_AS(read_weighting(wrong_count, t4), InvalidInput);
    std::istringstream not_a_triangle("4 4\n0 1 2 0.5\n0 1 3 0.5\n0 2 3 0.5\n0 2 9 0.5\n");
    CHECK_THROWS(read_weighting(not_a_triangle, t4));
    std::istringstream bad_value("4 4\n0 1 2 0.5\n0 1 3 x\n0 2 3 0.5\n1 2 3 0.5\n");
    CHECK_THROWS_AS(read_weighting(bad_value, t4), ParseError);
}
