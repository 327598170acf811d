#include "ftd/lp_oracle.hpp"

#include "exact_simplex.hpp"
#include "ftd/numeric.hpp"
#include "sparse_simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>

namespace ftd
{
    namespace
    {
        detail::BinaryColumns incidence(const TriangleIndex &ti)
        {
            detail::BinaryColumns a;
            a.rows = static_cast<int>(ti.num_edges());
            a.start.reserve(ti.size() + 1);
            a.index.reserve(3 * ti.size());
            for (std::size_t t = 0; t < ti.size(); ++t) {
                for (EdgeId e : ti.edges_of(static_cast<TriangleId>(t)))
                    a.index.push_back(e);
                a.start.push_back(static_cast<std::int64_t>(a.index.size()));
            }
            return a;
        }

        double max_residual(const TriangleIndex &ti, const std::vector<double> &rho)
        {
            double worst = 0.0;
            for (EdgeId e = 0; e < ti.num_edges(); ++e) {
                CompensatedSum s;
                for (TriangleId t : ti.edge_triangles(e))
                    s += rho[static_cast<std::size_t>(t)];
                worst = std::max(worst, std::abs(s.value() - 1.0));
            }
            return worst;
        }

        /// Accepts rho if it is non-negative up to rounding and satisfies every edge within tol.
        bool accept_witness(const TriangleIndex &ti, std::vector<double> &rho, double tol)
        {
            for (double &x : rho) {
                if (! std::isfinite(x) || x < -1e-12)
                    return false;
                x = std::max(x, 0.0);
            }
            return max_residual(ti, rho) <= tol;
        }

        /// Edge sums of rho: A rho.
        void edge_sums(const TriangleIndex &ti, const std::vector<double> &rho, std::vector<double> &out)
        {
            out.resize(static_cast<std::size_t>(ti.num_edges()));
            for (EdgeId e = 0; e < ti.num_edges(); ++e) {
                CompensatedSum s;
                for (TriangleId t : ti.edge_triangles(e))
                    s += rho[static_cast<std::size_t>(t)];
                out[static_cast<std::size_t>(e)] = s.value();
            }
        }

        double column_sum(const TriangleIndex &ti, const std::vector<double> &z, std::size_t t)
        {
            const auto &es = ti.edges_of(static_cast<TriangleId>(t));
            return z[static_cast<std::size_t>(es[0])] + z[static_cast<std::size_t>(es[1])] + z[static_cast<std::size_t>(es[2])];
        }

        /// Jacobi-preconditioned CG for (A D A^T + lambda I) x = r, D = diag(active), applied matrix-free.
        int masked_cg(const TriangleIndex &ti, const std::vector<char> &active, double lambda, const std::vector<double> &r, std::vector<double> &x,
                      double rel_tol, int max_iters)
        {
            auto m = r.size();
            std::vector<double> diag(m, lambda);
            for (std::size_t t = 0; t < ti.size(); ++t)
                if (active[t])
                    for (EdgeId e : ti.edges_of(static_cast<TriangleId>(t)))
                        diag[static_cast<std::size_t>(e)] += 1.0;
            std::vector<double> col(ti.size());
            auto apply = [&](const std::vector<double> &v, std::vector<double> &out) {
                for (std::size_t t = 0; t < ti.size(); ++t)
                    col[t] = active[t] ? column_sum(ti, v, t) : 0.0;
                for (std::size_t e = 0; e < m; ++e) {
                    double s = lambda * v[e];
                    for (TriangleId t : ti.edge_triangles(static_cast<EdgeId>(e)))
                        s += col[static_cast<std::size_t>(t)];
                    out[e] = s;
                }
            };
            x.assign(m, 0.0);
            std::vector<double> res = r, zv(m), pv(m), q(m);
            auto dot = [](const std::vector<double> &u, const std::vector<double> &v) {
                double s = 0.0;
                for (std::size_t i = 0; i < u.size(); ++i)
                    s += u[i] * v[i];
                return s;
            };
            double r0 = std::sqrt(dot(r, r));
            if (r0 == 0.0)
                return 0;
            for (std::size_t i = 0; i < m; ++i)
                zv[i] = diag[i] > 0.0 ? res[i] / diag[i] : res[i];
            pv = zv;
            double rz = dot(res, zv);
            int it = 0;
            for (; it < max_iters; ++it) {
                apply(pv, q);
                double pq = dot(pv, q);
                if (! (pq > 0.0))
                    break;
                double alpha = rz / pq;
                for (std::size_t i = 0; i < m; ++i) {
                    x[i] += alpha * pv[i];
                    res[i] -= alpha * q[i];
                }
                if (std::sqrt(dot(res, res)) <= rel_tol * r0)
                    return it + 1;
                for (std::size_t i = 0; i < m; ++i)
                    zv[i] = diag[i] > 0.0 ? res[i] / diag[i] : res[i];
                double rz_next = dot(res, zv);
                double beta = rz_next / rz;
                rz = rz_next;
                for (std::size_t i = 0; i < m; ++i)
                    pv[i] = zv[i] + beta * pv[i];
            }
            return it;
        }

        struct ProjectionOutcome
        {
            std::optional<std::vector<double>> witness;
            /// Direction of the diverging dual when the projection has no feasible target: a Farkas candidate.
            std::vector<double> farkas;
            int iterations = 0;
        };

        /**
         * Euclidean projection of rho0 onto {A rho = 1, rho >= 0} through its dual: minimise
         * theta(z) = |max(0, rho0 + A^T z)|^2 / 2 - 1^T z, whose gradient is A max(0, rho0 + A^T z) - 1,
         * by semismooth Newton with an Armijo line search. theta is unbounded below exactly when the
         * set is empty, and then z / |z| tends to a Farkas direction.
         */
        ProjectionOutcome project_dual_newton(const TriangleIndex &ti, const std::vector<double> &rho0, double tol, int max_rounds)
        {
            ProjectionOutcome out;
            auto m = static_cast<std::size_t>(ti.num_edges());
            auto nt = ti.size();
            std::vector<double> z(m, 0.0), u = rho0, rho(nt), sums, grad(m), d, ad(nt), trial(nt);
            std::vector<char> active(nt);
            auto theta_at = [&](const std::vector<double> &uu, const std::vector<double> &zz) {
                CompensatedSum s;
                for (double x : uu)
                    if (x > 0.0)
                        s += 0.5 * x * x;
                for (double x : zz)
                    s += -x;
                return s.value();
            };
            double theta = theta_at(u, z);
            for (int round = 0; round < max_rounds; ++round) {
                out.iterations = round + 1;
                for (std::size_t t = 0; t < nt; ++t) {
                    rho[t] = std::max(u[t], 0.0);
                    active[t] = u[t] > 0.0;
                }
                edge_sums(ti, rho, sums);
                double gnorm = 0.0;
                for (std::size_t e = 0; e < m; ++e) {
                    grad[e] = sums[e] - 1.0;
                    gnorm = std::max(gnorm, std::abs(grad[e]));
                }
                if (gnorm <= 0.01 * tol) {
                    out.witness = rho;
                    return out;
                }
                double lambda = std::min(1e-3, gnorm * 1e-2);
                std::vector<double> rhs(m);
                for (std::size_t e = 0; e < m; ++e)
                    rhs[e] = -grad[e];
                masked_cg(ti, active, lambda, rhs, d, std::min(1e-2, std::max(gnorm, 1e-12)), 20 * static_cast<int>(std::sqrt(static_cast<double>(m))) + 200);
                double slope = 0.0;
                for (std::size_t e = 0; e < m; ++e)
                    slope += grad[e] * d[e];
                if (! (slope < 0.0)) {
                    // Fall back to steepest descent if CG returned no descent direction.
                    d = rhs;
                    slope = 0.0;
                    for (std::size_t e = 0; e < m; ++e)
                        slope -= grad[e] * grad[e];
                }
                for (std::size_t t = 0; t < nt; ++t)
                    ad[t] = column_sum(ti, d, t);
                double step = 1.0;
                double next = theta;
                std::vector<double> znext(m);
                for (int k = 0; k < 40; ++k, step *= 0.5) {
                    for (std::size_t t = 0; t < nt; ++t)
                        trial[t] = u[t] + step * ad[t];
                    for (std::size_t e = 0; e < m; ++e)
                        znext[e] = z[e] + step * d[e];
                    next = theta_at(trial, znext);
                    if (next <= theta + 1e-4 * step * slope)
                        break;
                }
                if (! (next < theta) && ! (next <= theta + 1e-4 * step * slope))
                    break;
                z.swap(znext);
                // Recompute u from z to keep rounding from accumulating.
                for (std::size_t t = 0; t < nt; ++t)
                    u[t] = rho0[t] + column_sum(ti, z, t);
                theta = theta_at(u, z);
                double zmax = 0.0;
                for (double x : z)
                    zmax = std::max(zmax, std::abs(x));
                if (zmax > 1e9)
                    break;
            }
            out.farkas = z;
            return out;
        }

        /// Scales a raw Farkas direction so every triangle sums to <= 0 and the total is >= 1.
        std::optional<std::vector<double>> normalise_farkas(const TriangleIndex &ti, std::vector<double> y)
        {
            auto total = [&] { return compensated_sum(y); };
            double s = total();
            if (! (s > 0.0))
                return std::nullopt;
            for (double &v : y)
                v /= s;
            double worst = 0.0;
            for (std::size_t t = 0; t < ti.size(); ++t) {
                const auto &es = ti.edges_of(static_cast<TriangleId>(t));
                worst = std::max(worst, y[static_cast<std::size_t>(es[0])] + y[static_cast<std::size_t>(es[1])] + y[static_cast<std::size_t>(es[2])]);
            }
            if (worst > 0.0)
                for (double &v : y)
                    v -= worst / 3.0 * (1.0 + 1e-12);
            s = total();
            if (! (s > 0.0))
                return std::nullopt;
            for (double &v : y)
                v = v / s * (1.0 + 1e-14);
            for (double &v : y)
                if (std::abs(v) < 1e-300)
                    v = 0.0;
            return y;
        }

        bool certificate_ok(const TriangleIndex &ti, const std::vector<double> &y)
        {
            if (y.size() != static_cast<std::size_t>(ti.num_edges()))
                return false;
            for (double v : y)
                if (! std::isfinite(v))
                    return false;
            for (std::size_t t = 0; t < ti.size(); ++t) {
                const auto &es = ti.edges_of(static_cast<TriangleId>(t));
                double col = y[static_cast<std::size_t>(es[0])] + y[static_cast<std::size_t>(es[1])] + y[static_cast<std::size_t>(es[2])];
                if (col > certificate_column_tol)
                    return false;
            }
            return compensated_sum(y) >= 1.0;
        }

        FeasibilityResult decide_exact(const TriangleIndex &ti)
        {
            FeasibilityResult res;
            res.method = "exact";
            auto a = incidence(ti);
            auto exact = detail::exact_phase_one(a);
            res.iterations = exact.pivots;
            if (exact.feasible) {
                res.verdict = Verdict::feasible;
                res.weighting = Weighting(ti.size());
                for (std::size_t t = 0; t < ti.size(); ++t)
                    res.weighting[t] = exact.x[t].convert_to<double>();
                return res;
            }
            // Exact check first, then scale so the rounded vector still satisfies the inequalities.
            detail::Rational total = 0;
            for (const auto &v : exact.y)
                total += v;
            for (std::size_t t = 0; t < ti.size(); ++t) {
                const auto &es = ti.edges_of(static_cast<TriangleId>(t));
                if (exact.y[static_cast<std::size_t>(es[0])] + exact.y[static_cast<std::size_t>(es[1])] + exact.y[static_cast<std::size_t>(es[2])] > 0)
                    total = -1;
            }
            std::vector<double> y(exact.y.size());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = exact.y[i].convert_to<double>();
            auto cert = total > 0 ? normalise_farkas(ti, y) : std::nullopt;
            if (! cert) {
                res.verdict = Verdict::inconclusive;
                res.message = "exact certificate failed its own check";
                return res;
            }
            res.verdict = Verdict::infeasible;
            res.certificate = std::move(*cert);
            return res;
        }
    }

    std::string to_string(Verdict v)
    {
        switch (v) {
        case Verdict::feasible:
            return "FEASIBLE";
        case Verdict::infeasible:
            return "INFEASIBLE";
        case Verdict::uncovered:
            return "UNCOVERED";
        case Verdict::inconclusive:
            return "ORACLE_INCONCLUSIVE";
        }
        return "UNKNOWN";
    }

    FeasibilityResult decide_ftd(const Graph &g, const TriangleIndex &ti, const OracleOptions &opts)
    {
        auto start = std::chrono::steady_clock::now();
        auto stamp = [&](FeasibilityResult r) {
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return r;
        };
        auto m = static_cast<std::size_t>(g.num_edges());

        if (m == 0) {
            FeasibilityResult r;
            r.verdict = Verdict::feasible;
            r.weighting = Weighting(ti.size());
            r.method = "trivial";
            r.message = "no edges";
            return stamp(r);
        }

        if (! opts.force_lp) {
            auto uncovered = uncovered_edges(g, ti);
            if (! uncovered.empty()) {
                FeasibilityResult r;
                r.verdict = Verdict::uncovered;
                r.uncovered_edge = uncovered.front();
                r.method = "trivial";
                // The indicator of an uncovered edge is already a Farkas vector.
                r.certificate.assign(m, 0.0);
                r.certificate[static_cast<std::size_t>(*g.edge_id(uncovered.front().u, uncovered.front().v))] = 1.0;
                return stamp(r);
            }
        }

        // Presolve: an edge in no triangle is an empty row with right-hand side 1.
        for (EdgeId e = 0; e < static_cast<EdgeId>(m); ++e)
            if (ti.edge_triangles(e).empty()) {
                FeasibilityResult r;
                r.verdict = Verdict::infeasible;
                r.method = "presolve";
                r.certificate.assign(m, 0.0);
                r.certificate[static_cast<std::size_t>(e)] = 1.0;
                return stamp(r);
            }

        if (opts.exact) {
            if (g.num_vertices() > exact_vertex_limit)
                throw SizeLimit("exact mode is limited to n <= " + std::to_string(exact_vertex_limit));
            return stamp(decide_exact(ti));
        }

        if (opts.projection_first) {
            std::vector<double> rho0(ti.size(), static_cast<double>(m) / (3.0 * static_cast<double>(ti.size())));
            auto proj = project_dual_newton(ti, rho0, opts.feasibility_tol, opts.projection_rounds);
            FeasibilityResult r;
            r.method = "projection";
            r.iterations = proj.iterations;
            if (proj.witness) {
                r.verdict = Verdict::feasible;
                r.weighting = Weighting(std::move(*proj.witness));
                return stamp(r);
            }
            if (auto cert = normalise_farkas(ti, proj.farkas); cert && certificate_ok(ti, *cert)) {
                r.verdict = Verdict::infeasible;
                r.certificate = std::move(*cert);
                return stamp(r);
            }
        }

        auto a = incidence(ti);
        detail::SimplexOptions sopts;
        sopts.pivot_tol = opts.pivot_tol;
        sopts.feasibility_tol = opts.feasibility_tol;
        auto lp = detail::sparse_phase_one(a, std::vector<double>(m, 1.0), sopts);

        FeasibilityResult r;
        r.method = "simplex";
        r.iterations = lp.iterations;
        if (lp.outcome != detail::PhaseOneResult::Outcome::optimal) {
            r.verdict = Verdict::inconclusive;
            r.message = lp.outcome == detail::PhaseOneResult::Outcome::iteration_limit ? "simplex iteration limit" : "simplex numerical failure";
            return stamp(r);
        }

        if (lp.objective <= 1e3 * opts.feasibility_tol) {
            // Project the basic solution to clean up rounding, then apply the same acceptance test as every witness.
            std::vector<double> rho = lp.x;
            auto polished = project_dual_newton(ti, rho, opts.feasibility_tol, 20);
            if (polished.witness && accept_witness(ti, *polished.witness, opts.feasibility_tol)) {
                rho = std::move(*polished.witness);
                r.verdict = Verdict::feasible;
                r.weighting = Weighting(std::move(rho));
                return stamp(r);
            }
            if (accept_witness(ti, lp.x, opts.feasibility_tol)) {
                r.verdict = Verdict::feasible;
                r.weighting = Weighting(std::move(lp.x));
                return stamp(r);
            }
        }

        if (auto cert = normalise_farkas(ti, lp.y); cert && certificate_ok(ti, *cert)) {
            r.verdict = Verdict::infeasible;
            r.certificate = std::move(*cert);
            return stamp(r);
        }
        r.verdict = Verdict::inconclusive;
        r.message = "phase-one objective " + std::to_string(lp.objective) + " gave neither a witness nor a certificate within tolerance";
        return stamp(r);
    }

    bool verify_certificate(const Graph &g, const TriangleIndex &ti, const FeasibilityResult &result)
    {
        switch (result.verdict) {
        case Verdict::feasible: {
            if (result.weighting.size() != ti.size())
                return false;
            for (double x : result.weighting.values)
                if (! std::isfinite(x) || x < -1e-9)
                    return false;
            return max_residual(ti, result.weighting.values) <= 1e-9;
        }
        case Verdict::infeasible:
            return certificate_ok(ti, result.certificate);
        case Verdict::uncovered:
            return result.uncovered_edge && g.has_edge(result.uncovered_edge->u, result.uncovered_edge->v) &&
                   ti.edge_triangles(*g.edge_id(result.uncovered_edge->u, result.uncovered_edge->v)).empty();
        case Verdict::inconclusive:
            return false;
        }
        return false;
    }

    void write_certificate(std::ostream &out, const Graph &g, const FeasibilityResult &result, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        out << "farkas " << g.num_vertices() << '\n';
        char buf[64];
        for (std::size_t e = 0; e < result.certificate.size(); ++e) {
            if (result.certificate[e] == 0.0)
                continue;
            const Edge &ed = g.edge(static_cast<EdgeId>(e));
            std::snprintf(buf, sizeof buf, "%.17g", result.certificate[e]);
            out << ed.u << ' ' << ed.v << ' ' << buf << '\n';
        }
    }
}
