#pragma once

#include "ftd/common.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ftd
{
    /// Fixed-width bit rows over the vertex set.
    using Word = std::uint64_t;

    inline std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

    inline int popcount_and(std::span<const Word> a, std::span<const Word> b)
    {
        int c = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            c += std::popcount(a[i] & b[i]);
        return c;
    }

    template <typename Fn>
    void for_each_bit(std::span<const Word> row, Fn &&fn)
    {
        for (std::size_t w = 0; w < row.size(); ++w)
            for (Word bits = row[w]; bits; bits &= bits - 1)
                fn(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
    }

    /**
     * Simple undirected graph on vertices 0..n-1.
     *
     * Edges are kept sorted lexicographically and their position is the edge id. Adjacency is held
     * both as sorted neighbour lists and as bit rows; common-neighbourhood queries use the bit rows.
     * Immutable after construction.
     */
    class Graph
    {
    public:
        Graph() = default;
        explicit Graph(Vertex n);

        /// Throws InvalidInput on self-loops, out-of-range endpoints, or duplicate edges.
        static Graph from_edges(Vertex n, std::span<const Edge> edges);
        static Graph complete(Vertex n);
        static Graph cycle(Vertex n);

        Vertex num_vertices() const { return _n; }
        std::int64_t num_edges() const { return static_cast<std::int64_t>(_edges.size()); }

        std::span<const Edge> edges() const { return _edges; }
        const Edge &edge(EdgeId id) const { return _edges[static_cast<std::size_t>(id)]; }

        std::span<const Vertex> neighbors(Vertex v) const
        {
            return {_adjacency.data() + _offsets[v], _adjacency.data() + _offsets[v + 1]};
        }
        std::span<const Word> neighbor_bits(Vertex v) const
        {
            return {_bits.data() + static_cast<std::size_t>(v) * _words, _words};
        }
        std::size_t words() const { return _words; }

        int degree(Vertex v) const { return static_cast<int>(_offsets[v + 1] - _offsets[v]); }
        int codegree(Vertex u, Vertex v) const { return popcount_and(neighbor_bits(u), neighbor_bits(v)); }

        bool has_edge(Vertex u, Vertex v) const
        {
            if (u < 0 || v < 0 || u >= _n || v >= _n)
                return false;
            return (neighbor_bits(u)[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1U;
        }

        std::optional<EdgeId> edge_id(Vertex u, Vertex v) const;
        /// Throws InvalidEdge if absent.
        EdgeId require_edge(Edge e) const;

        std::vector<Word> common_neighbors(Vertex u, Vertex v) const;

    private:
        Vertex _n = 0;
        std::vector<Edge> _edges;
        std::vector<std::size_t> _offsets{0};
        std::vector<Vertex> _adjacency;
        std::vector<std::size_t> _upper_begin;
        std::vector<EdgeId> _edge_offset;
        std::size_t _words = 0;
        std::vector<Word> _bits;
    };

    /**
     * All triangles of a graph with dense ids in lexicographic order of sorted triples, plus
     * edge -> triangles and vertex -> triangles incidence lists (ascending ids).
     */
    class TriangleIndex
    {
    public:
        TriangleIndex() = default;
        explicit TriangleIndex(const Graph &g);

        std::size_t size() const { return _triangles.size(); }
        bool empty() const { return _triangles.empty(); }
        std::span<const Triangle> triangles() const { return _triangles; }
        const Triangle &triangle(TriangleId t) const { return _triangles[static_cast<std::size_t>(t)]; }

        /// Edge ids of (u,v), (u,w), (v,w).
        const std::array<EdgeId, 3> &edges_of(TriangleId t) const { return _triangle_edges[static_cast<std::size_t>(t)]; }

        std::span<const TriangleId> edge_triangles(EdgeId e) const
        {
            return {_edge_inc.data() + _edge_off[static_cast<std::size_t>(e)], _edge_inc.data() + _edge_off[static_cast<std::size_t>(e) + 1]};
        }
        std::span<const TriangleId> vertex_triangles(Vertex v) const
        {
            return {_vertex_inc.data() + _vertex_off[static_cast<std::size_t>(v)], _vertex_inc.data() + _vertex_off[static_cast<std::size_t>(v) + 1]};
        }

        std::optional<TriangleId> find(Vertex a, Vertex b, Vertex c) const;

        Vertex num_vertices() const { return _n; }
        std::int64_t num_edges() const { return static_cast<std::int64_t>(_edge_off.size()) - 1; }

    private:
        Vertex _n = 0;
        std::vector<Triangle> _triangles;
        std::vector<std::array<EdgeId, 3>> _triangle_edges;
        std::vector<std::size_t> _edge_off{0};
        std::vector<TriangleId> _edge_inc;
        std::vector<std::size_t> _vertex_off{0};
        std::vector<TriangleId> _vertex_inc;
    };

    inline TriangleIndex build_triangle_index(const Graph &g) { return TriangleIndex(g); }

    /// Edges lying in no triangle, in edge-id order.
    std::vector<Edge> uncovered_edges(const Graph &g, const TriangleIndex &ti);

    /// G(n,p): pair number k of the lexicographic pair order is kept iff to_unit(CounterRng::at(seed, k)) < p.
    Graph gen_gnp(Vertex n, double p, std::uint64_t seed);

    /// The random graph process and its hitting time for "every edge lies in a triangle".
    struct ProcessTrace
    {
        Vertex n = 0;
        std::vector<Edge> order;
        /// 1-based step count; G_tau holds the first tau edges of `order`.
        std::int64_t tau = 0;

        Graph graph_at(std::int64_t step) const;
    };

    ProcessTrace gen_process(Vertex n, std::uint64_t seed);

    struct GraphStats
    {
        Vertex n = 0;
        std::int64_t m = 0;
        double p = 0.0;
        int min_degree = 0;
        int max_degree = 0;
        int min_codegree = 0;
        int max_codegree = 0;
        /// max_v |deg(v) - np| / np and max_{u<v} |codeg(u,v) - np^2| / np^2.
        double degree_deviation = 0.0;
        double codegree_deviation = 0.0;
        double degree_tolerance = 0.0;
        double codegree_tolerance = 0.0;
        bool degrees_concentrated = false;
        bool codegrees_concentrated = false;
    };

    /// Degree and codegree spread against np and np^2 with tolerances n^-0.2 and n^-0.1.
    GraphStats graph_stats(const Graph &g, double p);

    // Text formats. Lines starting with '#' are comments.
    Graph read_graph(std::istream &in);
    Graph read_graph(const std::filesystem::path &path);
    void write_graph(std::ostream &out, const Graph &g, const std::vector<std::string> &comments = {});

    void write_process(std::ostream &out, const ProcessTrace &trace);
    ProcessTrace read_process(std::istream &in);
}
