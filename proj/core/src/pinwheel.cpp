#include "ftd/gadgets.hpp"

#include "ftd/parallel.hpp"

#include <algorithm>
#include <array>

namespace ftd
{
    namespace
    {
        void check_k(int k)
        {
            if (k < 2)
                throw InvalidInput("wheel half-length k must be at least 2");
        }

        struct CycleSearch
        {
            std::span<const Word> adjacency;
            std::size_t words;
            std::size_t d;
            int length;
            const std::function<void(std::span<const int>)> &fn;

            std::vector<int> path;
            std::vector<int> dist;
            std::vector<Word> allowed;
            std::vector<Word> used;

            const Word *row(int x) const { return adjacency.data() + static_cast<std::size_t>(x) * words; }

            void run()
            {
                path.assign(static_cast<std::size_t>(length), 0);
                dist.assign(d, 0);
                allowed.assign(words, 0);
                used.assign(words, 0);
                for (std::size_t a = 0; a < d; ++a) {
                    // Vertices above the anchor.
                    std::fill(allowed.begin(), allowed.end(), 0);
                    for (std::size_t x = a + 1; x < d; ++x)
                        allowed[x / 64] |= Word{1} << (x % 64);
                    if (! distances(static_cast<int>(a)))
                        continue;
                    path[0] = static_cast<int>(a);
                    std::fill(used.begin(), used.end(), 0);
                    extend(1);
                }
            }

            /// BFS from the anchor inside anchor + allowed; false if too few vertices to close a cycle.
            bool distances(int anchor)
            {
                std::fill(dist.begin(), dist.end(), length + 1);
                std::vector<int> queue{anchor};
                dist[static_cast<std::size_t>(anchor)] = 0;
                std::size_t reached = 0;
                for (std::size_t head = 0; head < queue.size(); ++head) {
                    int x = queue[head];
                    ++reached;
                    if (dist[static_cast<std::size_t>(x)] >= length)
                        continue;
                    const Word *r = row(x);
                    for (std::size_t w = 0; w < words; ++w)
                        for (Word bits = r[w] & allowed[w]; bits; bits &= bits - 1) {
                            auto y = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                            if (dist[static_cast<std::size_t>(y)] > length) {
                                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                                queue.push_back(y);
                            }
                        }
                }
                return reached >= static_cast<std::size_t>(length);
            }

            void extend(int depth)
            {
                const Word *r = row(path[static_cast<std::size_t>(depth) - 1]);
                int remaining = length - depth;
                for (std::size_t w = 0; w < words; ++w)
                    for (Word bits = r[w] & allowed[w] & ~used[w]; bits; bits &= bits - 1) {
                        auto y = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        if (dist[static_cast<std::size_t>(y)] > remaining)
                            continue;
                        if (remaining == 1) {
                            // Closing vertex: adjacent to the anchor, and the reflection is skipped.
                            if (dist[static_cast<std::size_t>(y)] != 1 || y < path[1])
                                continue;
                            path[static_cast<std::size_t>(depth)] = y;
                            fn(path);
                            continue;
                        }
                        path[static_cast<std::size_t>(depth)] = y;
                        used[w] |= Word{1} << (y % 64);
                        extend(depth + 1);
                        used[w] &= ~(Word{1} << (y % 64));
                    }
            }
        };

        /**
         * Anchored 2k-cycles of one neighbourhood, walked as a search tree so that work shared by
         * cycles with a common prefix is done once. Each cycle starts at its minimum vertex, and its
         * second vertex is below its last, so every undirected cycle is reached exactly once.
         * Visitor::leaf(search, depth, closers) handles all cycles closed by the vertices in
         * `closers` and returns their payload; Visitor::inner(search, depth, edge, payload) is
         * called after the subtree below the prefix edge at position depth - 1 returns `payload`.
         */
        template <typename Payload>
        struct CycleTree
        {
            const Word *adjacency;
            std::size_t words;
            std::size_t d;
            const std::int32_t *local_edge;
            int length;

            std::vector<int> path;
            /// Local edge ids of the prefix: edges[i] joins path[i] and path[i + 1].
            std::vector<std::int32_t> edges;
            std::vector<int> dist;
            std::vector<Word> allowed, used, closing;

            CycleTree(const Word *adj, std::size_t w, std::size_t d_, const std::int32_t *le, int len)
                : adjacency(adj), words(w), d(d_), local_edge(le), length(len), path(static_cast<std::size_t>(len)), edges(static_cast<std::size_t>(len)),
                  dist(d_), allowed(w), used(w), closing(w)
            {
            }

            const Word *row(int x) const { return adjacency + static_cast<std::size_t>(x) * words; }
            std::int32_t edge(int x, int y) const { return local_edge[static_cast<std::size_t>(x) * d + static_cast<std::size_t>(y)]; }
            int anchor() const { return path[0]; }

            template <typename Visitor>
            void run(Visitor &visitor)
            {
                for (std::size_t a = 0; a + static_cast<std::size_t>(length) <= d; ++a) {
                    std::fill(allowed.begin(), allowed.end(), 0);
                    for (std::size_t x = a + 1; x < d; ++x)
                        allowed[x / 64] |= Word{1} << (x % 64);
                    if (! distances(static_cast<int>(a)))
                        continue;
                    path[0] = static_cast<int>(a);
                    std::fill(used.begin(), used.end(), 0);
                    extend(visitor, 1);
                }
            }

            /// BFS from the anchor inside anchor + allowed; false if too few vertices to close a cycle.
            bool distances(int a)
            {
                std::fill(dist.begin(), dist.end(), length + 1);
                std::vector<int> queue{a};
                dist[static_cast<std::size_t>(a)] = 0;
                for (std::size_t head = 0; head < queue.size(); ++head) {
                    int x = queue[head];
                    if (dist[static_cast<std::size_t>(x)] >= length)
                        continue;
                    const Word *r = row(x);
                    for (std::size_t w = 0; w < words; ++w)
                        for (Word bits = r[w] & allowed[w]; bits; bits &= bits - 1) {
                            auto y = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                            if (dist[static_cast<std::size_t>(y)] > length) {
                                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                                queue.push_back(y);
                            }
                        }
                }
                return queue.size() >= static_cast<std::size_t>(length);
            }

            template <typename Visitor>
            Payload extend(Visitor &visitor, int depth)
            {
                const Word *r = row(path[static_cast<std::size_t>(depth) - 1]);
                int remaining = length - depth;
                if (remaining == 1) {
                    // Closing vertices: adjacent to the anchor, unused, and above the second vertex.
                    Word any = 0;
                    for (std::size_t w = 0; w < words; ++w) {
                        closing[w] = r[w] & row(anchor())[w] & allowed[w] & ~used[w] & above[w];
                        any |= closing[w];
                    }
                    return any ? visitor.leaf(*this, depth, closing) : Payload{};
                }
                Payload total{};
                for (std::size_t w = 0; w < words; ++w)
                    for (Word bits = r[w] & allowed[w] & ~used[w]; bits; bits &= bits - 1) {
                        auto y = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        if (dist[static_cast<std::size_t>(y)] > remaining)
                            continue;
                        path[static_cast<std::size_t>(depth)] = y;
                        std::int32_t e = edge(path[static_cast<std::size_t>(depth) - 1], y);
                        edges[static_cast<std::size_t>(depth) - 1] = e;
                        if (depth == 1) {
                            above.assign(words, 0);
                            for (std::size_t x = static_cast<std::size_t>(y) + 1; x < d; ++x)
                                above[x / 64] |= Word{1} << (x % 64);
                        }
                        used[w] |= Word{1} << (y % 64);
                        Payload below = extend(visitor, depth + 1);
                        used[w] &= ~(Word{1} << (y % 64));
                        if (below != Payload{}) {
                            visitor.inner(*this, depth, e, below);
                            total += below;
                        }
                    }
                return total;
            }

            std::vector<Word> above;
        };

        /// Sign of the perimeter edge at position i of a cycle.
        constexpr double position_sign(int i) { return i % 2 == 0 ? 1.0 : -1.0; }

        /// Accumulates per-position pair counts: pairs[x * m + y] for x before y on some cycle, plus edge counts.
        struct GramVisitor
        {
            std::size_t m;
            std::vector<double> &pairs;
            std::vector<std::int64_t> &counts;

            std::int64_t leaf(const CycleTree<std::int64_t> &t, int depth, const std::vector<Word> &closers)
            {
                // Positions depth - 1 and depth = length - 1 are the two closing edges.
                int p = t.path[static_cast<std::size_t>(depth) - 1];
                int prefix = depth - 1;
                std::array<double *, 64> rows;
                std::array<double, 64> signs;
                for (int i = 0; i < prefix; ++i) {
                    rows[static_cast<std::size_t>(i)] = pairs.data() + static_cast<std::size_t>(t.edges[static_cast<std::size_t>(i)]) * m;
                    signs[static_cast<std::size_t>(i)] = position_sign(i) * position_sign(depth - 1);
                }
                double s_last = position_sign(depth - 1) * position_sign(depth);
                std::int64_t n = 0;
                for (std::size_t w = 0; w < t.words; ++w)
                    for (Word bits = closers[w]; bits; bits &= bits - 1) {
                        auto y = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        auto e1 = static_cast<std::size_t>(t.edge(p, y));
                        auto e2 = static_cast<std::size_t>(t.edge(y, t.anchor()));
                        for (int i = 0; i < prefix; ++i) {
                            rows[static_cast<std::size_t>(i)][e1] += signs[static_cast<std::size_t>(i)];
                            rows[static_cast<std::size_t>(i)][e2] -= signs[static_cast<std::size_t>(i)];
                        }
                        pairs[e1 * m + e2] += s_last;
                        ++counts[e1];
                        ++counts[e2];
                        ++n;
                    }
                return n;
            }

            void inner(const CycleTree<std::int64_t> &t, int depth, std::int32_t e, std::int64_t below)
            {
                auto col = static_cast<std::size_t>(e);
                auto n = static_cast<double>(below);
                for (int i = 0; i < depth - 1; ++i)
                    pairs[static_cast<std::size_t>(t.edges[static_cast<std::size_t>(i)]) * m + col] += position_sign(i) * position_sign(depth - 1) * n;
                counts[col] += below;
            }
        };

        /// Cycles through each local edge.
        struct CountVisitor
        {
            std::vector<std::int64_t> &counts;

            std::int64_t leaf(const CycleTree<std::int64_t> &t, int depth, const std::vector<Word> &closers)
            {
                int p = t.path[static_cast<std::size_t>(depth) - 1];
                std::int64_t n = 0;
                for (std::size_t w = 0; w < t.words; ++w)
                    for (Word bits = closers[w]; bits; bits &= bits - 1) {
                        auto y = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        ++counts[static_cast<std::size_t>(t.edge(p, y))];
                        ++counts[static_cast<std::size_t>(t.edge(y, t.anchor()))];
                        ++n;
                    }
                return n;
            }

            void inner(const CycleTree<std::int64_t> &, int, std::int32_t e, std::int64_t below) { counts[static_cast<std::size_t>(e)] += below; }
        };

        /// y += sum_C s_C (s_C . g): the payload of a subtree is the sum of its cycles' alternating sums.
        struct ApplyVisitor
        {
            const std::vector<double> &g;
            std::vector<double> &y;

            double prefix(const CycleTree<double> &t, int depth) const
            {
                double a = 0.0;
                for (int i = 0; i < depth - 1; ++i)
                    a += position_sign(i) * g[static_cast<std::size_t>(t.edges[static_cast<std::size_t>(i)])];
                return a;
            }

            double leaf(const CycleTree<double> &t, int depth, const std::vector<Word> &closers)
            {
                int p = t.path[static_cast<std::size_t>(depth) - 1];
                double base = prefix(t, depth);
                double s1 = position_sign(depth - 1), s2 = position_sign(depth);
                double total = 0.0;
                for (std::size_t w = 0; w < t.words; ++w)
                    for (Word bits = closers[w]; bits; bits &= bits - 1) {
                        auto v = static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        auto e1 = static_cast<std::size_t>(t.edge(p, v));
                        auto e2 = static_cast<std::size_t>(t.edge(v, t.anchor()));
                        double a = base + s1 * g[e1] + s2 * g[e2];
                        y[e1] += s1 * a;
                        y[e2] += s2 * a;
                        total += a;
                    }
                return total;
            }

            void inner(const CycleTree<double> &, int depth, std::int32_t e, double below) { y[static_cast<std::size_t>(e)] += position_sign(depth - 1) * below; }
        };

        /// Paths w_0 = u, ..., w_{2k-1} = v with inner vertices in `inside`, calling fn at each.
        template <typename Fn>
        void paths_in(const Graph &g, const std::vector<Word> &inside, Vertex u, Vertex v, int k, Fn &&fn)
        {
            int last = 2 * k - 1;
            std::vector<Vertex> path(static_cast<std::size_t>(last) + 1);
            std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
            path[0] = u;
            used[static_cast<std::size_t>(u)] = used[static_cast<std::size_t>(v)] = 1;
            auto rec = [&](auto &self, int depth) -> void {
                Vertex x = path[static_cast<std::size_t>(depth) - 1];
                if (depth == last) {
                    if (g.has_edge(x, v)) {
                        path[static_cast<std::size_t>(last)] = v;
                        fn(path);
                    }
                    return;
                }
                auto nb = g.neighbor_bits(x);
                for (std::size_t w = 0; w < inside.size(); ++w)
                    for (Word bits = nb[w] & inside[w]; bits; bits &= bits - 1) {
                        auto y = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                        if (used[static_cast<std::size_t>(y)])
                            continue;
                        used[static_cast<std::size_t>(y)] = 1;
                        path[static_cast<std::size_t>(depth)] = y;
                        self(self, depth + 1);
                        used[static_cast<std::size_t>(y)] = 0;
                    }
            };
            rec(rec, 1);
        }
    }

    void for_each_cycle(std::span<const Word> adjacency, std::size_t words, std::size_t d, int length, const std::function<void(std::span<const int>)> &fn)
    {
        if (length < 3)
            throw InvalidInput("cycle length must be at least 3");
        if (d < static_cast<std::size_t>(length))
            return;
        CycleSearch search{adjacency, words, d, length, fn, {}, {}, {}, {}};
        search.run();
    }

    void for_each_pinwheel(const Graph &g, Vertex u, Vertex v, int k, const std::function<void(const PinwheelEmbedding &)> &fn)
    {
        check_k(k);
        if (! g.has_edge(u, v))
            throw InvalidEdge(Edge(u, v));
        auto centres = g.common_neighbors(u, v);
        PinwheelEmbedding emb;
        for_each_bit(centres, [&](Vertex c) {
            emb.c = c;
            paths_in(g, std::vector<Word>(g.neighbor_bits(c).begin(), g.neighbor_bits(c).end()), u, v, k, [&](const std::vector<Vertex> &path) {
                emb.perimeter = path;
                fn(emb);
            });
        });
    }

    std::int64_t pinwheel_count(const Graph &g, Edge e, int k)
    {
        check_k(k);
        if (! g.has_edge(e.u, e.v))
            throw InvalidEdge(e);
        std::int64_t paths = 0;
        for_each_bit(g.common_neighbors(e.u, e.v), [&](Vertex c) {
            paths_in(g, std::vector<Word>(g.neighbor_bits(c).begin(), g.neighbor_bits(c).end()), e.u, e.v, k, [&](const std::vector<Vertex> &) { ++paths; });
        });
        return 2 * paths;
    }

    PinwheelOperator::PinwheelOperator(const Graph &g, const TriangleIndex &ti, Options opts) : _g(g), _ti(ti), _opts(opts)
    {
        check_k(opts.k);
        if (opts.k > 32)
            throw SizeLimit("wheel half-length k above 32 is not supported");
        Vertex n = g.num_vertices();
        _centres.resize(static_cast<std::size_t>(n));
        std::size_t entries = 0;
        for (Vertex c = 0; c < n; ++c) {
            Centre &centre = _centres[static_cast<std::size_t>(c)];
            centre.c = c;
            auto nb = g.neighbors(c);
            centre.local.assign(nb.begin(), nb.end());
            std::size_t d = centre.local.size();
            centre.words = words_for(d);
            centre.adjacency.assign(d * centre.words, 0);
            centre.local_edge.assign(d * d, -1);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = i + 1; j < d; ++j) {
                    auto id = g.edge_id(centre.local[i], centre.local[j]);
                    if (! id)
                        continue;
                    centre.adjacency[i * centre.words + j / 64] |= Word{1} << (j % 64);
                    centre.adjacency[j * centre.words + i / 64] |= Word{1} << (i % 64);
                    auto local = static_cast<std::int32_t>(centre.edge.size());
                    centre.local_edge[i * d + j] = centre.local_edge[j * d + i] = local;
                    centre.edge.push_back(*id);
                    centre.triangle.push_back(*ti.find(c, centre.local[i], centre.local[j]));
                }
            entries += centre.edge.size() * centre.edge.size();
        }
        _streaming = entries > opts.matrix_budget;

        std::vector<std::vector<std::int64_t>> local_counts(_centres.size());
        std::vector<std::int64_t> cycles(_centres.size(), 0);
        parallel_for(_centres.size(), opts.threads, [&](std::size_t i) {
            build_centre(_centres[i], ! _streaming, local_counts[i]);
            std::int64_t through = 0;
            for (auto x : local_counts[i])
                through += x;
            cycles[i] = through / (2 * _opts.k);
        });

        _pin_counts.assign(static_cast<std::size_t>(g.num_edges()), 0);
        for (std::size_t i = 0; i < _centres.size(); ++i) {
            for (std::size_t e = 0; e < local_counts[i].size(); ++e)
                _pin_counts[static_cast<std::size_t>(_centres[i].edge[e])] += 2 * local_counts[i][e];
            _cycles += cycles[i];
        }
    }

    void PinwheelOperator::build_centre(Centre &centre, bool store_gram, std::vector<std::int64_t> &counts) const
    {
        std::size_t m = centre.edge.size();
        std::size_t d = centre.local.size();
        counts.assign(m, 0);
        CycleTree<std::int64_t> tree(centre.adjacency.data(), centre.words, d, centre.local_edge.data(), 2 * _opts.k);
        if (! store_gram) {
            CountVisitor visitor{counts};
            tree.run(visitor);
            return;
        }
        std::vector<double> pairs(m * m, 0.0);
        GramVisitor visitor{m, pairs, counts};
        tree.run(visitor);
        // Ordered pair counts become the symmetric Gram matrix; its diagonal is the cycle count per edge.
        centre.gram.assign(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j)
                centre.gram[i * m + j] = pairs[i * m + j] + pairs[j * m + i];
            centre.gram[i * m + i] = static_cast<double>(counts[i]);
        }
    }

    std::optional<Edge> PinwheelOperator::missing_edge() const
    {
        for (std::size_t e = 0; e < _pin_counts.size(); ++e)
            if (_pin_counts[e] == 0)
                return _g.edge(static_cast<EdgeId>(e));
        return std::nullopt;
    }

    Weighting PinwheelOperator::apply(const Weighting &sigma) const
    {
        check_aligned(_ti, sigma);
        if (auto e = missing_edge())
            throw GadgetMissing("no pinwheel on edge " + std::to_string(e->u) + "-" + std::to_string(e->v), *e);

        auto disc = edge_discrepancies(_ti, sigma);
        std::vector<double> weight(disc.size());
        for (std::size_t e = 0; e < disc.size(); ++e)
            weight[e] = 2.0 * disc[e] / static_cast<double>(_pin_counts[e]);

        // Per-centre contributions are written to private slots and merged in centre order.
        std::vector<std::vector<double>> change(_centres.size());
        int length = 2 * _opts.k;
        parallel_for(_centres.size(), _opts.threads, [&](std::size_t i) {
            const Centre &centre = _centres[i];
            std::size_t m = centre.edge.size();
            std::vector<double> local_w(m), y(m, 0.0);
            for (std::size_t e = 0; e < m; ++e)
                local_w[e] = weight[static_cast<std::size_t>(centre.edge[e])];
            if (! _streaming) {
                for (std::size_t r = 0; r < m; ++r) {
                    const double *row = centre.gram.data() + r * m;
                    double acc = 0.0;
                    for (std::size_t s = 0; s < m; ++s)
                        acc += row[s] * local_w[s];
                    y[r] = acc;
                }
            }
            else {
                ApplyVisitor visitor{local_w, y};
                CycleTree<double> tree(centre.adjacency.data(), centre.words, centre.local.size(), centre.local_edge.data(), length);
                tree.run(visitor);
            }
            change[i] = std::move(y);
        });

        Weighting out = sigma;
        for (std::size_t i = 0; i < _centres.size(); ++i)
            for (std::size_t e = 0; e < change[i].size(); ++e)
                out[static_cast<std::size_t>(_centres[i].triangle[e])] -= change[i][e];
        return out;
    }

    Weighting apply_F(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, int k, const std::vector<std::int64_t> &pin_counts)
    {
        PinwheelOperator op(g, ti, {.k = k});
        if (pin_counts != op.pin_counts())
            throw InvalidInput("pin counts do not match the graph");
        return op.apply(sigma);
    }

    Weighting naive_adjust(const Graph &g, const TriangleIndex &ti, const Weighting &sigma)
    {
        check_aligned(ti, sigma);
        auto disc = edge_discrepancies(ti, sigma);
        Weighting out = sigma;
        for (EdgeId e = 0; e < g.num_edges(); ++e) {
            auto tris = ti.edge_triangles(e);
            if (tris.empty())
                throw GadgetMissing("edge " + std::to_string(g.edge(e).u) + "-" + std::to_string(g.edge(e).v) + " lies in no triangle", g.edge(e));
            // Each triangle collects a share from each of its three edges; the factor 3 keeps one step exact on K_3 and K_4.
            double share = disc[static_cast<std::size_t>(e)] / (3.0 * static_cast<double>(tris.size()));
            for (TriangleId t : tris)
                out[static_cast<std::size_t>(t)] -= share;
        }
        return out;
    }
}
