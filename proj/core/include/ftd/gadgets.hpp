#pragma once

#include "ftd/graph.hpp"
#include "ftd/weighting.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ftd
{
    /// Labeled (u,v)-bowtie: triangles ua1a2 and cb1b2 get +1, ca1a2 and vb1b2 get -1.
    struct BowtieEmbedding
    {
        Vertex u, v, a1, a2, b1, b2, c;

        /// The four triangles with their signs, in the order ua1a2, cb1b2, ca1a2, vb1b2.
        std::array<std::pair<Triangle, int>, 4> terms() const
        {
            return {{{Triangle(u, a1, a2), +1}, {Triangle(c, b1, b2), +1}, {Triangle(c, a1, a2), -1}, {Triangle(v, b1, b2), -1}}};
        }
    };

    /// Labeled pinwheel on a 2k-wheel: perimeter w_0 = u, ..., w_{2k-1} = v around centre c.
    /// Triangle i is {c, w_i, w_{i+1 mod 2k}} with sign (-1)^{i+1}, so the base triangle {c, v, u} gets +1.
    struct PinwheelEmbedding
    {
        Vertex c;
        std::vector<Vertex> perimeter;

        int sign(std::size_t i) const { return i % 2 == 0 ? -1 : +1; }
        Triangle triangle(std::size_t i) const { return {c, perimeter[i], perimeter[(i + 1) % perimeter.size()]}; }
    };

    /// Calls fn(const BowtieEmbedding &) for every labeled (u,v)-bowtie: c ascending, then ordered
    /// (a1, a2), then ordered (b1, b2). Throws InvalidInput if u == v.
    void for_each_bowtie(const Graph &g, Vertex u, Vertex v, const std::function<void(const BowtieEmbedding &)> &fn);

    /// |B_{u,v}|, counted in aggregate per centre without listing embeddings.
    std::int64_t bowtie_count(const Graph &g, Vertex u, Vertex v);

    /**
     * Vertex balancing: sigma - (1/n) sum_u delta(u) sum_{v != u} avg_{B_{u,v}} psi.
     *
     * Exact balancing requires sum_v delta(v) = 0, i.e. total weight e(G)/3. Defects at rounding
     * level are treated as zero. Throws GadgetMissing naming (u, v) if a needed B_{u,v} is empty.
     */
    Weighting bowtie_balance(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, int threads = 1);

    /// Calls fn for every labeled (u,v)-pinwheel with perimeter length 2k (fixed orientation).
    void for_each_pinwheel(const Graph &g, Vertex u, Vertex v, int k, const std::function<void(const PinwheelEmbedding &)> &fn);

    /// |S(e)| over both orientations: 2 x the labeled pinwheels over (u, v). Throws InvalidEdge if e is absent.
    std::int64_t pinwheel_count(const Graph &g, Edge e, int k);

    /**
     * Each undirected cycle of length `length` in the graph given by `adjacency` (bit rows over
     * local vertices 0..d-1) exactly once. The cycle is reported as its vertex sequence starting at
     * its minimum vertex, with the second vertex smaller than the last.
     */
    void for_each_cycle(std::span<const Word> adjacency, std::size_t words, std::size_t d, int length, const std::function<void(std::span<const int>)> &fn);

    /**
     * The pinwheel operator F(sigma) = sigma - sum_e delta_e(sigma) Phi_e for a fixed graph.
     *
     * Construction enumerates every 2k-cycle in every neighbourhood G[N(c)] once. With perimeter
     * edges e_0..e_{2k-1} in traversal order and A = sum_m (-1)^m 2 delta_m / |S(e_m)|, the cycle
     * adds -(-1)^j A to the triangle {c} + e_j. Per centre this is a symmetric matrix
     * M_c = sum_C s_C s_C^T over local edges, stored when it fits the memory budget; otherwise
     * cycles are re-enumerated on every application.
     */
    class PinwheelOperator
    {
    public:
        struct Options
        {
            int k = 4;
            int threads = 1;
            /// Largest total number of stored matrix entries before falling back to streaming.
            std::size_t matrix_budget = std::size_t{1} << 25;
        };

        PinwheelOperator(const Graph &g, const TriangleIndex &ti, Options opts);
        PinwheelOperator(const Graph &g, const TriangleIndex &ti) : PinwheelOperator(g, ti, Options{}) {}

        /// |S(e)| per edge id.
        const std::vector<std::int64_t> &pin_counts() const { return _pin_counts; }
        /// First edge without a pinwheel, if any.
        std::optional<Edge> missing_edge() const;
        bool streaming() const { return _streaming; }
        std::int64_t cycle_count() const { return _cycles; }

        /// F(sigma). Throws GadgetMissing if some edge has no pinwheel.
        Weighting apply(const Weighting &sigma) const;

    private:
        struct Centre
        {
            Vertex c;
            std::vector<Vertex> local;
            std::vector<Word> adjacency;
            std::size_t words = 0;
            /// Local edge list: global edge id and triangle id of {c} + edge; local_edge[i * d + j] maps pairs.
            std::vector<EdgeId> edge;
            std::vector<TriangleId> triangle;
            std::vector<std::int32_t> local_edge;
            std::vector<double> gram;
        };

        void build_centre(Centre &centre, bool store_gram, std::vector<std::int64_t> &counts) const;

        const Graph &_g;
        const TriangleIndex &_ti;
        Options _opts;
        bool _streaming = false;
        std::int64_t _cycles = 0;
        std::vector<Centre> _centres;
        std::vector<std::int64_t> _pin_counts;
    };

    /// F(sigma) via a one-off PinwheelOperator; pin_counts must match it.
    Weighting apply_F(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, int k, const std::vector<std::int64_t> &pin_counts);

    /// Spreads each edge's discrepancy evenly over its triangles: Delta(T) = -sum_{e in T} delta_e / (3 |T(e)|).
    Weighting naive_adjust(const Graph &g, const TriangleIndex &ti, const Weighting &sigma);
}
