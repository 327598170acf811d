#include "ftd/graph.hpp"

#include "ftd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ftd
{
    Graph::Graph(Vertex n) : Graph(from_edges(n, {})) {}

    Graph Graph::from_edges(Vertex n, std::span<const Edge> edges)
    {
        if (n < 0)
            throw InvalidInput("vertex count must be non-negative");

        Graph g;
        g._n = n;
        g._edges.reserve(edges.size());
        for (const Edge &e : edges) {
            if (e.u == e.v)
                throw InvalidInput("self-loop at vertex " + std::to_string(e.u));
            if (e.u < 0 || e.v >= n)
                throw InvalidInput("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " out of range for n = " + std::to_string(n));
            g._edges.push_back(e);
        }
        std::sort(g._edges.begin(), g._edges.end());
        auto dup = std::adjacent_find(g._edges.begin(), g._edges.end());
        if (dup != g._edges.end())
            throw InvalidInput("duplicate edge " + std::to_string(dup->u) + "-" + std::to_string(dup->v));
        if (g._edges.size() > static_cast<std::size_t>(std::numeric_limits<EdgeId>::max()))
            throw SizeLimit("too many edges");

        auto un = static_cast<std::size_t>(n);
        std::vector<std::size_t> degree(un, 0);
        for (const Edge &e : g._edges) {
            ++degree[static_cast<std::size_t>(e.u)];
            ++degree[static_cast<std::size_t>(e.v)];
        }
        g._offsets.assign(un + 1, 0);
        for (std::size_t v = 0; v < un; ++v)
            g._offsets[v + 1] = g._offsets[v] + degree[v];
        g._adjacency.resize(g._offsets[un]);
        std::vector<std::size_t> fill(g._offsets.begin(), g._offsets.end() - 1);
        // Edges are sorted, so each list comes out sorted: lower neighbours first (in order of u), then upper.
        for (const Edge &e : g._edges)
            g._adjacency[fill[static_cast<std::size_t>(e.v)]++] = e.u;
        for (const Edge &e : g._edges)
            g._adjacency[fill[static_cast<std::size_t>(e.u)]++] = e.v;

        // Edge id of (u, w) for w > u is _edge_offset[u] + rank of w among u's upper neighbours.
        g._upper_begin.resize(un);
        g._edge_offset.assign(un + 1, 0);
        EdgeId next = 0;
        for (std::size_t v = 0; v < un; ++v) {
            auto nb = g.neighbors(static_cast<Vertex>(v));
            auto it = std::upper_bound(nb.begin(), nb.end(), static_cast<Vertex>(v));
            g._upper_begin[v] = g._offsets[v] + static_cast<std::size_t>(it - nb.begin());
            g._edge_offset[v] = next;
            next += static_cast<EdgeId>(nb.end() - it);
        }
        g._edge_offset[un] = next;

        g._words = words_for(un);
        g._bits.assign(un * g._words, 0);
        for (const Edge &e : g._edges) {
            g._bits[static_cast<std::size_t>(e.u) * g._words + static_cast<std::size_t>(e.v) / 64] |= Word{1} << (e.v % 64);
            g._bits[static_cast<std::size_t>(e.v) * g._words + static_cast<std::size_t>(e.u) / 64] |= Word{1} << (e.u % 64);
        }
        return g;
    }

    Graph Graph::complete(Vertex n)
    {
        std::vector<Edge> edges;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                edges.emplace_back(u, v);
        return from_edges(n, edges);
    }

    Graph Graph::cycle(Vertex n)
    {
        if (n < 3)
            throw InvalidInput("cycle needs at least 3 vertices");
        std::vector<Edge> edges;
        for (Vertex v = 0; v < n; ++v)
            edges.emplace_back(v, (v + 1) % n);
        return from_edges(n, edges);
    }

    std::optional<EdgeId> Graph::edge_id(Vertex u, Vertex v) const
    {
        if (! has_edge(u, v))
            return std::nullopt;
        if (u > v)
            std::swap(u, v);
        auto begin = _adjacency.begin() + static_cast<std::ptrdiff_t>(_upper_begin[static_cast<std::size_t>(u)]);
        auto end = _adjacency.begin() + static_cast<std::ptrdiff_t>(_offsets[static_cast<std::size_t>(u) + 1]);
        auto it = std::lower_bound(begin, end, v);
        return _edge_offset[static_cast<std::size_t>(u)] + static_cast<EdgeId>(it - begin);
    }

    EdgeId Graph::require_edge(Edge e) const
    {
        auto id = edge_id(e.u, e.v);
        if (! id)
            throw InvalidEdge(e);
        return *id;
    }

    std::vector<Word> Graph::common_neighbors(Vertex u, Vertex v) const
    {
        auto a = neighbor_bits(u);
        auto b = neighbor_bits(v);
        std::vector<Word> out(_words);
        for (std::size_t i = 0; i < _words; ++i)
            out[i] = a[i] & b[i];
        return out;
    }

    TriangleIndex::TriangleIndex(const Graph &g) : _n(g.num_vertices())
    {
        // Edges in lexicographic order, third vertex above v in increasing order: triples come out sorted.
        std::vector<Word> common(g.words());
        for (EdgeId id = 0; id < g.num_edges(); ++id) {
            const Edge &e = g.edge(id);
            auto a = g.neighbor_bits(e.u);
            auto b = g.neighbor_bits(e.v);
            std::size_t first = static_cast<std::size_t>(e.v + 1) / 64;
            for (std::size_t w = first; w < g.words(); ++w) {
                Word bits = a[w] & b[w];
                if (w == first) {
                    unsigned shift = static_cast<unsigned>(e.v + 1) % 64;
                    bits &= shift == 0 ? ~Word{0} : ~((Word{1} << shift) - 1);
                }
                for (; bits; bits &= bits - 1)
                    _triangles.emplace_back(e.u, e.v, static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
            }
        }
        if (_triangles.size() > static_cast<std::size_t>(std::numeric_limits<TriangleId>::max()))
            throw SizeLimit("too many triangles");

        auto m = static_cast<std::size_t>(g.num_edges());
        auto un = static_cast<std::size_t>(_n);
        _triangle_edges.resize(_triangles.size());
        std::vector<std::size_t> edge_count(m, 0), vertex_count(un, 0);
        for (std::size_t t = 0; t < _triangles.size(); ++t) {
            const Triangle &tr = _triangles[t];
            _triangle_edges[t] = {*g.edge_id(tr.u, tr.v), *g.edge_id(tr.u, tr.w), *g.edge_id(tr.v, tr.w)};
            for (EdgeId e : _triangle_edges[t])
                ++edge_count[static_cast<std::size_t>(e)];
            ++vertex_count[static_cast<std::size_t>(tr.u)];
            ++vertex_count[static_cast<std::size_t>(tr.v)];
            ++vertex_count[static_cast<std::size_t>(tr.w)];
        }

        _edge_off.assign(m + 1, 0);
        for (std::size_t e = 0; e < m; ++e)
            _edge_off[e + 1] = _edge_off[e] + edge_count[e];
        _vertex_off.assign(un + 1, 0);
        for (std::size_t v = 0; v < un; ++v)
            _vertex_off[v + 1] = _vertex_off[v] + vertex_count[v];

        _edge_inc.resize(_edge_off[m]);
        _vertex_inc.resize(_vertex_off[un]);
        std::vector<std::size_t> efill(_edge_off.begin(), _edge_off.end() - 1);
        std::vector<std::size_t> vfill(_vertex_off.begin(), _vertex_off.end() - 1);
        for (std::size_t t = 0; t < _triangles.size(); ++t) {
            auto id = static_cast<TriangleId>(t);
            for (EdgeId e : _triangle_edges[t])
                _edge_inc[efill[static_cast<std::size_t>(e)]++] = id;
            const Triangle &tr = _triangles[t];
            for (Vertex v : {tr.u, tr.v, tr.w})
                _vertex_inc[vfill[static_cast<std::size_t>(v)]++] = id;
        }
    }

    std::optional<TriangleId> TriangleIndex::find(Vertex a, Vertex b, Vertex c) const
    {
        Triangle key(a, b, c);
        auto it = std::lower_bound(_triangles.begin(), _triangles.end(), key);
        if (it == _triangles.end() || *it != key)
            return std::nullopt;
        return static_cast<TriangleId>(it - _triangles.begin());
    }

    std::vector<Edge> uncovered_edges(const Graph &g, const TriangleIndex &ti)
    {
        std::vector<Edge> out;
        for (EdgeId e = 0; e < g.num_edges(); ++e)
            if (ti.edge_triangles(e).empty())
                out.push_back(g.edge(e));
        return out;
    }

    Graph gen_gnp(Vertex n, double p, std::uint64_t seed)
    {
        if (n < 0)
            throw InvalidInput("vertex count must be non-negative");
        if (! (p >= 0.0 && p <= 1.0))
            throw InvalidInput("edge probability must lie in [0, 1]");
        std::vector<Edge> edges;
        std::uint64_t k = 0;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v, ++k)
                if (CounterRng::to_unit(CounterRng::at(seed, k)) < p)
                    edges.emplace_back(u, v);
        return Graph::from_edges(n, edges);
    }

    GraphStats graph_stats(const Graph &g, double p)
    {
        GraphStats s;
        s.n = g.num_vertices();
        s.m = g.num_edges();
        s.p = p;
        if (s.n == 0)
            return s;

        double n = s.n;
        double np = n * p;
        double np2 = n * p * p;
        s.degree_tolerance = std::pow(n, -0.2);
        s.codegree_tolerance = std::pow(n, -0.1);

        s.min_degree = std::numeric_limits<int>::max();
        for (Vertex v = 0; v < s.n; ++v) {
            int d = g.degree(v);
            s.min_degree = std::min(s.min_degree, d);
            s.max_degree = std::max(s.max_degree, d);
        }

        if (s.n >= 2) {
            s.min_codegree = std::numeric_limits<int>::max();
            for (Vertex u = 0; u < s.n; ++u)
                for (Vertex v = u + 1; v < s.n; ++v) {
                    int c = g.codegree(u, v);
                    s.min_codegree = std::min(s.min_codegree, c);
                    s.max_codegree = std::max(s.max_codegree, c);
                }
        }

        // Relative deviation from a zero expectation is zero when the observations are zero too.
        auto relative = [](double lo, double hi, double expected) {
            if (expected == 0.0)
                return (lo == 0.0 && hi == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
            return std::max(std::abs(lo - expected), std::abs(hi - expected)) / expected;
        };
        s.degree_deviation = relative(s.min_degree, s.max_degree, np);
        s.codegree_deviation = relative(s.min_codegree, s.max_codegree, np2);
        s.degrees_concentrated = s.degree_deviation <= s.degree_tolerance;
        s.codegrees_concentrated = s.codegree_deviation <= s.codegree_tolerance;
        return s;
    }
}
