#include "ftd/gadgets.hpp"

#include "ftd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ftd
{
    namespace
    {
        void check_pair(const Graph &g, Vertex u, Vertex v)
        {
            if (u == v)
                throw InvalidInput("bowtie endpoints must be distinct");
            if (u < 0 || v < 0 || u >= g.num_vertices() || v >= g.num_vertices())
                throw InvalidInput("bowtie endpoint out of range");
        }

        bool test_bit(const std::vector<Word> &row, Vertex x)
        {
            return (row[static_cast<std::size_t>(x) / 64] >> (x % 64)) & 1U;
        }

        void clear_bit(std::vector<Word> &row, Vertex x) { row[static_cast<std::size_t>(x) / 64] &= ~(Word{1} << (x % 64)); }

        /// Per centre c: X = N(u) & N(c) - v and Y = N(v) & N(c) - u, plus each side's internal
        /// edge count and per-vertex internal degrees.
        struct Sides
        {
            std::vector<Word> x, y;
            std::int64_t edges_x = 0, edges_y = 0;

            void load(const Graph &g, Vertex u, Vertex v, Vertex c)
            {
                x = g.common_neighbors(u, c);
                y = g.common_neighbors(v, c);
                clear_bit(x, v);
                clear_bit(y, u);
                edges_x = internal_edges(g, x);
                edges_y = internal_edges(g, y);
            }

            static std::int64_t internal_edges(const Graph &g, const std::vector<Word> &side)
            {
                std::int64_t twice = 0;
                for_each_bit(side, [&](Vertex a) { twice += popcount_and(g.neighbor_bits(a), side); });
                return twice / 2;
            }

            static std::int64_t degree_in(const Graph &g, const std::vector<Word> &side, Vertex a)
            {
                return test_bit(side, a) ? popcount_and(g.neighbor_bits(a), side) : 0;
            }

            /// Ordered edges of `other` avoiding both ends of the edge a1a2 of this side.
            static std::int64_t ordered_avoiding(const Graph &g, const std::vector<Word> &other, std::int64_t other_edges, Vertex a1, Vertex a2)
            {
                std::int64_t e = other_edges - degree_in(g, other, a1) - degree_in(g, other, a2);
                if (test_bit(other, a1) && test_bit(other, a2))
                    ++e;
                return 2 * e;
            }
        };

        /// Calls fn(x1, x2) for each unordered edge inside a side.
        template <typename Fn>
        void for_each_side_edge(const Graph &g, const std::vector<Word> &side, Fn &&fn)
        {
            for_each_bit(side, [&](Vertex a1) {
                for_each_bit(side, [&](Vertex a2) {
                    if (a2 > a1 && g.has_edge(a1, a2))
                        fn(a1, a2);
                });
            });
        }
    }

    void for_each_bowtie(const Graph &g, Vertex u, Vertex v, const std::function<void(const BowtieEmbedding &)> &fn)
    {
        check_pair(g, u, v);
        Sides s;
        for (Vertex c = 0; c < g.num_vertices(); ++c) {
            if (c == u || c == v)
                continue;
            s.load(g, u, v, c);
            for_each_bit(s.x, [&](Vertex a1) {
                for_each_bit(s.x, [&](Vertex a2) {
                    if (a1 == a2 || ! g.has_edge(a1, a2))
                        return;
                    for_each_bit(s.y, [&](Vertex b1) {
                        if (b1 == a1 || b1 == a2)
                            return;
                        for_each_bit(s.y, [&](Vertex b2) {
                            if (b2 == b1 || b2 == a1 || b2 == a2 || ! g.has_edge(b1, b2))
                                return;
                            fn(BowtieEmbedding{u, v, a1, a2, b1, b2, c});
                        });
                    });
                });
            });
        }
    }

    std::int64_t bowtie_count(const Graph &g, Vertex u, Vertex v)
    {
        check_pair(g, u, v);
        std::int64_t total = 0;
        Sides s;
        for (Vertex c = 0; c < g.num_vertices(); ++c) {
            if (c == u || c == v)
                continue;
            s.load(g, u, v, c);
            if (s.edges_x == 0 || s.edges_y == 0)
                continue;
            // Each unordered a-edge carries 2 orderings times the ordered b-edges that avoid it.
            for_each_side_edge(g, s.x, [&](Vertex a1, Vertex a2) { total += 2 * Sides::ordered_avoiding(g, s.y, s.edges_y, a1, a2); });
        }
        return total;
    }

    Weighting bowtie_balance(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, int threads)
    {
        check_aligned(ti, sigma);
        Vertex n = g.num_vertices();
        auto defects = vertex_defects(g, ti, sigma);

        // Defects at rounding level carry no information; leaving them alone keeps balanced inputs unchanged.
        std::vector<Vertex> active;
        for (Vertex u = 0; u < n; ++u)
            if (std::abs(defects[static_cast<std::size_t>(u)]) > 1e-14 * (1.0 + g.degree(u)))
                active.push_back(u);
        if (active.empty())
            return sigma;

        auto tri = [&](Vertex a, Vertex b, Vertex c) { return static_cast<std::size_t>(*ti.find(a, b, c)); };

        // Each active vertex gets its own delta buffer, merged in vertex order.
        auto chunks = fixed_chunks(active.size(), std::min<std::size_t>(32, std::max<std::size_t>(1, (std::size_t{1} << 24) / std::max<std::size_t>(1, ti.size()))));
        std::vector<std::vector<double>> deltas(chunks.size());
        parallel_for(chunks.size(), threads, [&](std::size_t chunk) {
            std::vector<double> delta(ti.size(), 0.0);
            Sides s;
            for (std::size_t idx = chunks[chunk].begin; idx < chunks[chunk].end; ++idx) {
                Vertex u = active[idx];
                double du = defects[static_cast<std::size_t>(u)];
                for (Vertex v = 0; v < n; ++v) {
                    if (v == u)
                        continue;
                    std::int64_t count = bowtie_count(g, u, v);
                    if (count == 0)
                        throw GadgetMissing("no (" + std::to_string(u) + "," + std::to_string(v) + ")-bowtie", std::nullopt, std::pair{u, v});
                    double scale = -du / (static_cast<double>(n) * static_cast<double>(count));
                    for (Vertex c = 0; c < n; ++c) {
                        if (c == u || c == v)
                            continue;
                        s.load(g, u, v, c);
                        if (s.edges_x == 0 || s.edges_y == 0)
                            continue;
                        for_each_side_edge(g, s.x, [&](Vertex a1, Vertex a2) {
                            double w = 2.0 * static_cast<double>(Sides::ordered_avoiding(g, s.y, s.edges_y, a1, a2)) * scale;
                            if (w == 0.0)
                                return;
                            delta[tri(u, a1, a2)] += w;
                            delta[tri(c, a1, a2)] -= w;
                        });
                        for_each_side_edge(g, s.y, [&](Vertex b1, Vertex b2) {
                            double w = 2.0 * static_cast<double>(Sides::ordered_avoiding(g, s.x, s.edges_x, b1, b2)) * scale;
                            if (w == 0.0)
                                return;
                            delta[tri(c, b1, b2)] += w;
                            delta[tri(v, b1, b2)] -= w;
                        });
                    }
                }
            }
            deltas[chunk] = std::move(delta);
        });

        Weighting out = sigma;
        for (const auto &delta : deltas)
            for (std::size_t t = 0; t < out.size(); ++t)
                out[t] += delta[t];
        return out;
    }
}
