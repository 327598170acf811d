#pragma once

// Independent brute-force oracles: plain backtracking over vertices, written without the library's
// enumerators so that agreement is meaningful.

#include "ftd/ftd.hpp"
#include "ftd/rng.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace ftd::testing
{
    /// Labeled pinwheels (c; w0 = u, ..., w_{2k-1} = v) over ordered edges, signs (-1)^{i+1} on {c, w_i, w_{i+1}}.
    inline void brute_pinwheels(const Graph &g, Vertex u, Vertex v, int k, const std::function<void(Vertex, const std::vector<Vertex> &)> &fn)
    {
        Vertex n = g.num_vertices();
        int len = 2 * k;
        for (Vertex c = 0; c < n; ++c) {
            if (c == u || c == v || ! g.has_edge(c, u) || ! g.has_edge(c, v))
                continue;
            std::vector<Vertex> w{u};
            std::vector<char> used(static_cast<std::size_t>(n), 0);
            used[static_cast<std::size_t>(u)] = used[static_cast<std::size_t>(v)] = used[static_cast<std::size_t>(c)] = 1;
            std::function<void()> rec = [&] {
                if (static_cast<int>(w.size()) == len - 1) {
                    if (g.has_edge(w.back(), v)) {
                        w.push_back(v);
                        fn(c, w);
                        w.pop_back();
                    }
                    return;
                }
                for (Vertex x = 0; x < n; ++x) {
                    if (used[static_cast<std::size_t>(x)] || ! g.has_edge(c, x) || ! g.has_edge(w.back(), x))
                        continue;
                    used[static_cast<std::size_t>(x)] = 1;
                    w.push_back(x);
                    rec();
                    w.pop_back();
                    used[static_cast<std::size_t>(x)] = 0;
                }
            };
            rec();
        }
    }

    /// Both orientations.
    inline std::int64_t brute_pinwheel_count(const Graph &g, Edge e, int k)
    {
        std::int64_t count = 0;
        auto tally = [&](Vertex, const std::vector<Vertex> &) { ++count; };
        brute_pinwheels(g, e.u, e.v, k, tally);
        brute_pinwheels(g, e.v, e.u, k, tally);
        return count;
    }

    /// sigma - sum_e delta_e / |S(e)| sum_{Phi in S(e)} Phi, by listing every labeled pinwheel, in long double.
    inline std::vector<long double> brute_apply_F(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, int k)
    {
        std::vector<long double> edge_w(static_cast<std::size_t>(g.num_edges()), 0.0L);
        for (std::size_t t = 0; t < ti.size(); ++t)
            for (EdgeId e : ti.edges_of(static_cast<TriangleId>(t)))
                edge_w[static_cast<std::size_t>(e)] += sigma[t];
        std::vector<long double> out(sigma.values.begin(), sigma.values.end());
        for (EdgeId id = 0; id < g.num_edges(); ++id) {
            Edge e = g.edge(id);
            auto count = brute_pinwheel_count(g, e, k);
            if (count == 0)
                continue;
            long double f = (edge_w[static_cast<std::size_t>(id)] - 1.0L) / static_cast<long double>(count);
            auto add = [&](Vertex c, const std::vector<Vertex> &w) {
                for (std::size_t i = 0; i < w.size(); ++i) {
                    auto t = ti.find(c, w[i], w[(i + 1) % w.size()]);
                    long double sign = i % 2 == 0 ? -1.0L : 1.0L;
                    out[static_cast<std::size_t>(*t)] -= f * sign;
                }
            };
            brute_pinwheels(g, e.u, e.v, k, add);
            brute_pinwheels(g, e.v, e.u, k, add);
        }
        return out;
    }

    /// Labeled (u,v)-bowties: distinct a1, a2, b1, b2, c outside {u, v} with triangles u a1 a2, c a1 a2, c b1 b2, v b1 b2.
    inline std::int64_t brute_bowtie_count(const Graph &g, Vertex u, Vertex v)
    {
        Vertex n = g.num_vertices();
        std::int64_t count = 0;
        auto tri = [&](Vertex a, Vertex b, Vertex c) { return g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c); };
        for (Vertex a1 = 0; a1 < n; ++a1)
            for (Vertex a2 = 0; a2 < n; ++a2)
                for (Vertex b1 = 0; b1 < n; ++b1)
                    for (Vertex b2 = 0; b2 < n; ++b2)
                        for (Vertex c = 0; c < n; ++c) {
                            std::vector<Vertex> vs{u, v, a1, a2, b1, b2, c};
                            bool distinct = true;
                            for (std::size_t i = 0; i < vs.size() && distinct; ++i)
                                for (std::size_t j = i + 1; j < vs.size(); ++j)
                                    distinct = distinct && vs[i] != vs[j];
                            if (distinct && tri(u, a1, a2) && tri(c, a1, a2) && tri(c, b1, b2) && tri(v, b1, b2))
                                ++count;
                        }
        return count;
    }

    /// Injections extending phi that preserve every pattern edge with an endpoint outside the roots.
    inline std::uint64_t brute_extension_count(const RootedPattern &p, const Graph &g, const std::vector<Vertex> &phi)
    {
        Vertex h = p.num_vertices(), n = g.num_vertices();
        std::vector<Vertex> image(static_cast<std::size_t>(h), -1);
        std::vector<char> is_root(static_cast<std::size_t>(h), 0);
        for (std::size_t i = 0; i < p.roots.size(); ++i) {
            image[static_cast<std::size_t>(p.roots[i])] = phi[i];
            is_root[static_cast<std::size_t>(p.roots[i])] = 1;
        }
        std::vector<Vertex> order;
        for (Vertex x = 0; x < h; ++x)
            if (! is_root[static_cast<std::size_t>(x)])
                order.push_back(x);
        std::uint64_t count = 0;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == order.size()) {
                for (const Edge &e : p.graph.edges()) {
                    if (is_root[static_cast<std::size_t>(e.u)] && is_root[static_cast<std::size_t>(e.v)])
                        continue;
                    if (! g.has_edge(image[static_cast<std::size_t>(e.u)], image[static_cast<std::size_t>(e.v)]))
                        return;
                }
                ++count;
                return;
            }
            for (Vertex y = 0; y < n; ++y) {
                if (std::find(image.begin(), image.end(), y) != image.end())
                    continue;
                image[static_cast<std::size_t>(order[i])] = y;
                rec(i + 1);
                image[static_cast<std::size_t>(order[i])] = -1;
            }
        };
        rec(0);
        return count;
    }

    /// max over nonempty W of (e(H[S u W]) - e(H[S])) / |W|, by listing subsets and counting edges directly.
    inline Ratio brute_max_density(const RootedPattern &p)
    {
        auto free = p.free_vertices();
        std::vector<char> in_s(static_cast<std::size_t>(p.num_vertices()), 0);
        for (Vertex r : p.roots)
            in_s[static_cast<std::size_t>(r)] = 1;
        Ratio best(-1);
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << free.size()); ++mask) {
            std::vector<char> in_w(static_cast<std::size_t>(p.num_vertices()), 0);
            for (std::size_t i = 0; i < free.size(); ++i)
                if ((mask >> i) & 1U)
                    in_w[static_cast<std::size_t>(free[i])] = 1;
            std::int64_t added = 0;
            for (const Edge &e : p.graph.edges()) {
                bool a = in_s[static_cast<std::size_t>(e.u)] || in_w[static_cast<std::size_t>(e.u)];
                bool b = in_s[static_cast<std::size_t>(e.v)] || in_w[static_cast<std::size_t>(e.v)];
                bool inside_s = in_s[static_cast<std::size_t>(e.u)] && in_s[static_cast<std::size_t>(e.v)];
                if (a && b && ! inside_s)
                    ++added;
            }
            Ratio r(added, std::popcount(mask));
            if (r > best)
                best = r;
        }
        return best;
    }

    /// Seeded G(n, p) graphs whose every edge carries a 2k-pinwheel.
    inline std::vector<Graph> pinwheel_covered_graphs(int count, Vertex n_lo, Vertex n_hi, std::uint64_t seed, int k = 4)
    {
        std::vector<Graph> out;
        for (std::uint64_t s = seed; static_cast<int>(out.size()) < count; ++s) {
            Vertex n = n_lo + static_cast<Vertex>(s % static_cast<std::uint64_t>(n_hi - n_lo + 1));
            double p = 0.7 + 0.25 * static_cast<double>(s % 7) / 6.0;
            Graph g = gen_gnp(n, p, s);
            TriangleIndex ti(g);
            if (ti.empty())
                continue;
            PinwheelOperator op(g, ti, {.k = k, .threads = 1, .matrix_budget = 0});
            if (! op.missing_edge())
                out.push_back(std::move(g));
        }
        return out;
    }

    /// Uniform weighting plus a deterministic perturbation, so that discrepancies are nonzero but moderate.
    inline Weighting perturbed_uniform(const Graph &g, const TriangleIndex &ti, std::uint64_t seed, double size)
    {
        Weighting s = uniform_weighting(g, ti);
        CounterRng rng(seed);
        for (auto &x : s.values)
            x += size * (2.0 * rng.uniform01() - 1.0);
        return s;
    }

    /// Exact feasibility of {A rho = 1, rho >= 0} by a dense phase-one tableau over the rationals with
    /// Bland's rule: one artificial per edge row, minimise their sum.
    inline bool exact_tableau_feasible(const Graph &g, const TriangleIndex &ti)
    {
        using Q = boost::multiprecision::mpq_rational;
        std::size_t m = static_cast<std::size_t>(g.num_edges()), nt = ti.size(), cols = nt + m;
        if (m == 0)
            return true;
        // Rows 0..m-1 are constraints, row m is the reduced phase-one objective; last column is the rhs.
        std::vector<std::vector<Q>> tab(m + 1, std::vector<Q>(cols + 1, Q(0)));
        for (std::size_t t = 0; t < nt; ++t)
            for (EdgeId e : ti.edges_of(static_cast<TriangleId>(t)))
                tab[static_cast<std::size_t>(e)][t] = 1;
        std::vector<std::size_t> basis(m);
        for (std::size_t r = 0; r < m; ++r) {
            tab[r][nt + r] = 1;
            tab[r][cols] = 1;
            basis[r] = nt + r;
        }
        // Objective row: minimise sum of artificials, expressed in the non-basic columns.
        for (std::size_t j = 0; j <= cols; ++j) {
            Q sum = 0;
            for (std::size_t r = 0; r < m; ++r)
                sum += tab[r][j];
            tab[m][j] = j >= nt && j < cols ? Q(0) : -sum;
        }
        while (true) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (tab[m][j] < 0) {
                    enter = j;
                    break;
                }
            if (enter == cols)
                break;
            std::size_t leave = m;
            Q best;
            for (std::size_t r = 0; r < m; ++r) {
                if (tab[r][enter] <= 0)
                    continue;
                Q ratio = tab[r][cols] / tab[r][enter];
                if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == m)
                return false; // cannot happen: the phase-one objective is bounded below by 0
            Q piv = tab[leave][enter];
            for (auto &x : tab[leave])
                x /= piv;
            for (std::size_t r = 0; r <= m; ++r) {
                if (r == leave || tab[r][enter] == 0)
                    continue;
                Q f = tab[r][enter];
                for (std::size_t j = 0; j <= cols; ++j)
                    tab[r][j] -= f * tab[leave][j];
            }
            basis[leave] = enter;
        }
        return tab[m][cols] == 0;
    }
}
