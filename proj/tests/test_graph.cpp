#include "ftd/graph.hpp"
#include "ftd/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace ftd;

namespace
{
    Graph triangle_with_tail()
    {
        std::vector<Edge> edges{{0, 1}, {0, 2}, {1, 2}, {2, 3}};
        return Graph::from_edges(4, edges);
    }

    std::vector<Triangle> brute_triangles(const Graph &g)
    {
        std::vector<Triangle> out;
        Vertex n = g.num_vertices();
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b)
                for (Vertex c = b + 1; c < n; ++c)
                    if (g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c))
                        out.emplace_back(a, b, c);
        return out;
    }
}

TEST_CASE("gen_gnp extremes and determinism")
{
    CHECK(gen_gnp(5, 0.0, 7).num_edges() == 0);
    Graph k5 = gen_gnp(5, 1.0, 7);
    CHECK(k5.num_edges() == 10);
    for (Vertex u = 0; u < 5; ++u)
        CHECK(k5.degree(u) == 4);

    Graph a = gen_gnp(60, 0.3, 11), b = gen_gnp(60, 0.3, 11), c = gen_gnp(60, 0.3, 12);
    CHECK(std::equal(a.edges().begin(), a.edges().end(), b.edges().begin(), b.edges().end()));
    CHECK_FALSE(std::equal(a.edges().begin(), a.edges().end(), c.edges().begin(), c.edges().end()));

    CHECK_THROWS_AS(gen_gnp(5, 1.5, 1), InvalidInput);
    CHECK_THROWS_AS(gen_gnp(-1, 0.5, 1), InvalidInput);
}

TEST_CASE("gen_gnp edge count within five standard deviations")
{
    double pairs = 1000.0 * 999.0 / 2.0;
    double mean = pairs * 0.1, sd = std::sqrt(pairs * 0.1 * 0.9);
    for (std::uint64_t seed : {1, 2, 3}) {
        double m = static_cast<double>(gen_gnp(1000, 0.1, seed).num_edges());
        CHECK(std::abs(m - mean) <= 5 * sd);
    }
}

TEST_CASE("trial seeds are base xor index")
{
    CHECK(trial_seed(5, 3) == (5 ^ 3));
    CHECK(CounterRng::at(9, 4) == CounterRng(9, 4)());
}

TEST_CASE("random graph process")
{
    auto t3 = gen_process(3, 1);
    CHECK(t3.tau == 3);
    CHECK(t3.graph_at(t3.tau).num_edges() == 3);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto t = gen_process(4, seed);
        CHECK(t.order.size() == 6);
        Graph at = t.graph_at(t.tau);
        CHECK(uncovered_edges(at, TriangleIndex(at)).empty());
        Graph before = t.graph_at(t.tau - 1);
        CHECK((before.num_edges() == 0 || ! uncovered_edges(before, TriangleIndex(before)).empty()));
    }

    auto x = gen_process(100, 42), y = gen_process(100, 42);
    CHECK(x.tau == y.tau);
    CHECK(x.order == y.order);

    // Every earlier prefix has an uncovered edge.
    auto t = gen_process(25, 3);
    for (std::int64_t i = 1; i < t.tau; ++i) {
        Graph g = t.graph_at(i);
        CHECK_FALSE(uncovered_edges(g, TriangleIndex(g)).empty());
    }
    CHECK_THROWS_AS(gen_process(2, 1), InvalidInput);
}

TEST_CASE("triangle index on small graphs")
{
    TriangleIndex k4(Graph::complete(4));
    CHECK(k4.size() == 4);
    for (EdgeId e = 0; e < 6; ++e)
        CHECK(k4.edge_triangles(e).size() == 2);

    TriangleIndex k5(Graph::complete(5));
    CHECK(k5.size() == 10);
    for (EdgeId e = 0; e < 10; ++e)
        CHECK(k5.edge_triangles(e).size() == 3);

    CHECK(TriangleIndex(Graph::cycle(5)).empty());
}

TEST_CASE("triangle index matches a triple loop")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Vertex n = static_cast<Vertex>(5 + seed % 26);
        Graph g = gen_gnp(n, 0.2 + 0.02 * static_cast<double>(seed), seed);
        TriangleIndex ti(g);
        auto expected = brute_triangles(g);
        REQUIRE(ti.size() == expected.size());
        CHECK(std::equal(expected.begin(), expected.end(), ti.triangles().begin()));
        for (std::size_t t = 0; t < ti.size(); ++t) {
            const Triangle &tr = ti.triangle(static_cast<TriangleId>(t));
            CHECK(ti.find(tr.w, tr.u, tr.v) == static_cast<TriangleId>(t));
            for (EdgeId e : ti.edges_of(static_cast<TriangleId>(t))) {
                auto inc = ti.edge_triangles(e);
                CHECK(std::find(inc.begin(), inc.end(), static_cast<TriangleId>(t)) != inc.end());
            }
        }
    }
}

TEST_CASE("uncovered edges")
{
    Graph g = triangle_with_tail();
    auto u = uncovered_edges(g, TriangleIndex(g));
    REQUIRE(u.size() == 1);
    CHECK(u[0] == Edge(2, 3));

    Graph k4 = Graph::complete(4);
    CHECK(uncovered_edges(k4, TriangleIndex(k4)).empty());
    Graph c5 = Graph::cycle(5);
    CHECK(uncovered_edges(c5, TriangleIndex(c5)).size() == 5);
}

TEST_CASE("graph stats")
{
    auto k = graph_stats(Graph::complete(9), 1.0);
    CHECK(k.min_degree == 8);
    CHECK(k.max_degree == 8);
    CHECK(k.min_codegree == 7);
    CHECK(k.max_codegree == 7);

    auto e = graph_stats(Graph(6), 0.0);
    CHECK(e.max_degree == 0);
    CHECK(e.max_codegree == 0);
}

TEST_CASE("degree and codegree concentration in G(2000, 0.3)")
{
    int both = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto s = graph_stats(gen_gnp(2000, 0.3, seed), 0.3);
        both += s.degrees_concentrated && s.codegrees_concentrated;
    }
    CHECK(both >= 99);
}

TEST_CASE("graph construction rejects bad edges")
{
    std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Graph::from_edges(3, loop), InvalidInput);
    std::vector<Edge> far{{0, 5}};
    CHECK_THROWS_AS(Graph::from_edges(3, far), InvalidInput);
    std::vector<Edge> dup{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(Graph::from_edges(3, dup), InvalidInput);
}

TEST_CASE("graph text format")
{
    Graph g = gen_gnp(20, 0.4, 3);
    std::stringstream ss;
    write_graph(ss, g, {"sample"});
    Graph h = read_graph(ss);
    CHECK(h.num_vertices() == 20);
    CHECK(std::equal(g.edges().begin(), g.edges().end(), h.edges().begin(), h.edges().end()));

    std::istringstream comments("# c\n3 2\n# mid\n0 1\n1 2\n");
    CHECK(read_graph(comments).num_edges() == 2);

    std::istringstream reversed("3 1\n2 1\n");
    CHECK_THROWS_AS(read_graph(reversed), ParseError);
    std::istringstream short_file("3 2\n0 1\n");
    CHECK_THROWS_AS(read_graph(short_file), ParseError);
    std::istringstream out_of_range("3 1\n0 3\n");
    CHECK_THROWS_AS(read_graph(out_of_range), ParseError);
    std::istringstream duplicate("3 2\n0 1\n0 1\n");
    CHECK_THROWS_AS(read_graph(duplicate), ParseError);
    std::istringstream junk("3 1\n0 x\n");
    CHECK_THROWS_AS(read_graph(junk), ParseError);
}

TEST_CASE("process text format")
{
    auto t = gen_process(8, 5);
    std::stringstream ss;
    write_process(ss, t);
    auto r = read_process(ss);
    CHECK(r.n == 8);
    CHECK(r.tau == t.tau);
    CHECK(r.order == t.order);
}
