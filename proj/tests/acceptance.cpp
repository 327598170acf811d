// Acceptance run: one PASS/FAIL line per criterion, each within its time limit.

#include "support.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ftd;
using namespace ftd::testing;

namespace
{
    struct Outcome
    {
        bool pass = true;
        std::string detail;
        /// Work done outside this criterion's own run but on its behalf (shared solves).
        double shared_seconds = 0.0;
    };

    struct Criterion
    {
        int id;
        std::string name;
        double limit_seconds;
        std::function<Outcome()> run;
    };

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    std::string fmt(const char *f, double x)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, f, x);
        return buf;
    }

    /// Collects failed clauses as text while the checks run.
    struct Clauses
    {
        std::vector<std::string> failed;
        void require(bool ok, const std::string &what)
        {
            if (! ok && failed.size() < 64)
                failed.push_back(what);
        }
        /// Same, but the message is only built on failure (for checks inside enumeration loops).
        template <typename Message>
        void require_lazy(bool ok, Message &&what)
        {
            if (! ok)
                require(false, what());
        }
        Outcome outcome(std::string summary) const
        {
            Outcome o;
            o.pass = failed.empty();
            o.detail = std::move(summary);
            for (std::size_t i = 0; i < failed.size() && i < 6; ++i)
                o.detail += "; FAILED: " + failed[i];
            if (failed.size() > 6)
                o.detail += "; ... " + std::to_string(failed.size() - 6) + " more";
            return o;
        }
    };

    // 1. Bowtie and pinwheel functions: vertex sums, total, and base edge, in integer arithmetic.
    Outcome gadget_identities()
    {
        Clauses cl;
        std::int64_t bowties = 0, pinwheels = 0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            Vertex n = 8 + static_cast<Vertex>(s % 7);
            double p = 0.5 + 0.25 * static_cast<double>(s % 5) / 4.0;
            Graph g = gen_gnp(n, p, 5000 + s);
            std::vector<int> vsum(static_cast<std::size_t>(n));
            std::string tag = "G(" + std::to_string(n) + "," + fmt("%.2f", p) + ") seed " + std::to_string(5000 + s);

            for (Vertex u = 0; u < n; ++u)
                for (Vertex v = 0; v < n; ++v) {
                    if (u == v)
                        continue;
                    for_each_bowtie(g, u, v, [&](const BowtieEmbedding &b) {
                        std::fill(vsum.begin(), vsum.end(), 0);
                        int total = 0;
                        for (const auto &[t, sign] : b.terms()) {
                            cl.require_lazy(g.has_edge(t.u, t.v) && g.has_edge(t.u, t.w) && g.has_edge(t.v, t.w), [&] { return tag + ": bowtie triangle missing"; });
                            total += sign;
                            for (Vertex x : {t.u, t.v, t.w})
                                vsum[static_cast<std::size_t>(x)] += sign;
                        }
                        cl.require_lazy(total == 0, [&] { return tag + ": bowtie total"; });
                        for (Vertex x = 0; x < n; ++x)
                            cl.require_lazy(vsum[static_cast<std::size_t>(x)] == (x == u ? 1 : x == v ? -1 : 0), [&] { return tag + ": bowtie vertex sum"; });
                        ++bowties;
                    });
                }

            for (const Edge &e : g.edges())
                for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}})
                    for_each_pinwheel(g, a, b, 4, [&](const PinwheelEmbedding &w) {
                        std::fill(vsum.begin(), vsum.end(), 0);
                        int total = 0, base = 0;
                        for (std::size_t i = 0; i < w.perimeter.size(); ++i) {
                            Triangle t = w.triangle(i);
                            int sign = w.sign(i);
                            total += sign;
                            for (Vertex x : {t.u, t.v, t.w})
                                vsum[static_cast<std::size_t>(x)] += sign;
                            bool has_u = t.u == e.u || t.v == e.u || t.w == e.u;
                            bool has_v = t.u == e.v || t.v == e.v || t.w == e.v;
                            if (has_u && has_v)
                                base += sign;
                        }
                        cl.require_lazy(total == 0, [&] { return tag + ": pinwheel total"; });
                        cl.require_lazy(base == 1, [&] { return tag + ": pinwheel base edge"; });
                        for (int x : vsum)
                            cl.require_lazy(x == 0, [&] { return tag + ": pinwheel vertex sum"; });
                        ++pinwheels;
                    });
        }
        cl.require(bowties > 0 && pinwheels > 0, "no gadgets enumerated");
        return cl.outcome("100 graphs, " + std::to_string(bowties) + " bowties, " + std::to_string(pinwheels) + " labeled pinwheels");
    }

    // 2. Aggregated F against explicit labeled-pinwheel enumeration.
    Outcome aggregation_oracle()
    {
        Clauses cl;
        double worst = 0.0;
        int graphs = 0;
        for (std::uint64_t s = 0; graphs < 25; ++s) {
            Vertex n = 10 + static_cast<Vertex>(s % 5);
            Graph g = gen_gnp(n, 0.75, 7000 + s);
            TriangleIndex ti(g);
            if (ti.empty())
                continue;
            PinwheelOperator op(g, ti);
            if (op.missing_edge())
                continue;
            ++graphs;
            // Random sigma: the uniform weighting scaled per triangle by U(0, 2).
            Weighting sigma = uniform_weighting(g, ti);
            CounterRng rng(9000 + s);
            for (auto &x : sigma.values)
                x *= 2.0 * rng.uniform01();
            auto oracle = brute_apply_F(g, ti, sigma, 4);
            auto fast = op.apply(sigma);
            double diff = 0.0;
            for (std::size_t t = 0; t < ti.size(); ++t)
                diff = std::max(diff, static_cast<double>(std::fabs(static_cast<long double>(fast[t]) - oracle[t])));
            worst = std::max(worst, diff);
            cl.require(diff <= 1e-12, "n=" + std::to_string(n) + " seed " + std::to_string(7000 + s) + " diff " + fmt("%.3g", diff));
        }
        return cl.outcome("25 graphs, n in [10,14], max |F - brute| = " + fmt("%.3g", worst));
    }

    // 3. Exact counts.
    Outcome counts()
    {
        Clauses cl;
        auto b = bowtie_count(Graph::complete(7), 0, 1);
        auto pw = pinwheel_count(Graph::complete(10), Edge(0, 1), 4);
        auto x = rooted_extension_count(wheel(4), Graph::complete(10), {0, 1});
        cl.require(b == 120, "bowtie_count(K7) = " + std::to_string(b));
        cl.require(pw == 80640, "pinwheel_count(K10) = " + std::to_string(pw));
        cl.require(x == 40320, "X(W8, K10) = " + std::to_string(x));
        std::size_t t = index_set_t().size(), v = index_set_v().size(), p = index_set_p().size(), q = index_set_q().size();
        cl.require(t == 2 && v == 3 && p == 37 && q == 12, "index set sizes");
        return cl.outcome("bowtie(K7)=" + std::to_string(b) + " pinwheel(K10)=" + std::to_string(pw) + " X(W8,K10)=" + std::to_string(x) + " |T|,|V|,|P|,|Q|=" +
                          std::to_string(t) + "," + std::to_string(v) + "," + std::to_string(p) + "," + std::to_string(q));
    }

    // 4. Rooted density and degeneracy suite.
    Outcome combinatorial_suite()
    {
        Clauses cl;
        auto report = verify_standard_suite();
        std::map<std::string, std::string> verdict;
        int p = 0, q = 0;
        for (const auto &row : report.rows) {
            verdict[row.id] = row.verdict;
            p += row.id.rfind("P(", 0) == 0 && row.verdict == "pass";
            q += row.id.rfind("Q(", 0) == 0 && row.verdict == "pass";
            cl.require(row.verdict != "fail", row.id + " failed");
        }
        cl.require(p == 37, std::to_string(p) + "/37 P cases");
        cl.require(q == 12, std::to_string(q) + "/12 Q cases");

        RootedPattern w2 = family_w(2).with_roots({"d", "a7", "b6", "a2"});
        auto d = max_root_density(w2);
        std::vector<Vertex> want{w2.vertex("c_a"), w2.vertex("a0"), w2.vertex("a1"), w2.vertex("c_b")};
        std::sort(want.begin(), want.end());
        cl.require(d.ratio == Ratio(11, 4), "W(2) maximum " + to_string(d.ratio));
        cl.require(d.witness == want, "W(2) witness " + format_labels(w2, d.witness));

        for (int t = 1; t <= 6; ++t)
            cl.require(is_k_degenerate(wheel_segment(t), 2).has_value(), "W8[Q" + std::to_string(t) + "] not 2-degenerate");
        RootedPattern bow = bowtie_pattern();
        for (auto roots : std::vector<std::vector<std::string>>{{"u", "a1", "a2"}, {"v", "b1", "b2"}, {"c", "a1", "a2"}, {"c", "b1", "b2"}})
            cl.require(is_k_degenerate(bow.with_roots(roots), 2).has_value(), "bowtie {" + roots[0] + " " + roots[1] + " " + roots[2] + "} not 2-degenerate");
        return cl.outcome("P " + std::to_string(p) + "/37, Q " + std::to_string(q) + "/12 at 11/4; W(2) max " + to_string(d.ratio) + " at " +
                          format_labels(w2, d.witness) + "; " + std::to_string(report.count("pass")) + " rows pass");
    }

    // 5 and 6 share one deterministic schedule of 50 solves.
    struct RegimeSolve
    {
        Vertex n;
        double p;
        std::uint64_t seed;
        Graph graph;
        SolveReport report;
    };

    struct RegimeRun
    {
        std::vector<RegimeSolve> solves;
        double seconds = 0.0;
        /// Whether a criterion has already been charged the solve time.
        mutable bool charged = false;
    };

    /// The solve time for the first caller, zero afterwards (the first caller's own clock already includes it).
    double uncharged_seconds(const RegimeRun &run, bool computed_now)
    {
        bool first = ! run.charged;
        run.charged = true;
        return first && ! computed_now ? run.seconds : 0.0;
    }

    /// n in {40, 45, ..., 60} crossed with ten values of n p^2 from 5 to 12. Each instance takes the
    /// first seed whose graph has every edge in a triangle (otherwise no FTD exists at all).
    std::optional<RegimeRun> regime_run;

    const RegimeRun &regime_solves()
    {
        auto &run = regime_run;
        if (run)
            return *run;
        run.emplace();
        auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < 50; ++i) {
            Vertex n = 40 + 5 * (i % 5);
            double np2 = 5.0 + 7.0 * static_cast<double>(i / 5) / 9.0;
            double p = std::sqrt(np2 / n);
            for (std::uint64_t seed = 100 + static_cast<std::uint64_t>(i);; seed += 1000) {
                Graph g = gen_gnp(n, p, seed);
                TriangleIndex ti(g);
                if (! uncovered_edges(g, ti).empty())
                    continue;
                auto rep = solve(g, ti, {.max_iters = 100});
                run->solves.push_back({n, p, seed, std::move(g), std::move(rep)});
                break;
            }
        }
        run->seconds = seconds_since(t0);
        return *run;
    }

    std::string instance_tag(const RegimeSolve &s)
    {
        return "n=" + std::to_string(s.n) + " np^2=" + fmt("%.2f", s.n * s.p * s.p) + " seed " + std::to_string(s.seed);
    }

    Outcome conservation()
    {
        bool computed_now = ! regime_run.has_value();
        const auto &run = regime_solves();
        Clauses cl;
        double worst_total = 0.0, worst_defect = 0.0;
        for (const auto &s : run.solves) {
            double e3 = static_cast<double>(s.graph.num_edges()) / 3.0;
            auto total_ok = [&](double total, const std::string &where) {
                double rel = std::abs(total - e3) / e3;
                worst_total = std::max(worst_total, rel);
                cl.require(rel <= 1e-8, instance_tag(s) + ": total weight at " + where + " off by " + fmt("%.3g", rel));
            };
            const auto &r = s.report;
            cl.require(r.stage1.has_value() && r.stage2.has_value(), instance_tag(s) + ": stopped before Stage 2 (" + to_string(r.status) + ")");
            if (r.stage1)
                total_ok(r.stage1->total_weight, "Stage 1");
            if (r.stage2) {
                total_ok(r.stage2->total_weight, "Stage 2");
                worst_defect = std::max(worst_defect, r.stage2->max_vertex_defect);
                cl.require(r.stage2->max_vertex_defect <= 1e-8, instance_tag(s) + ": vertex defect after Stage 2");
            }
            for (const auto &pt : r.trajectory) {
                total_ok(pt.total_weight, "iteration " + std::to_string(pt.iter));
                worst_defect = std::max(worst_defect, pt.max_vertex_defect);
                cl.require(pt.max_vertex_defect <= 1e-8, instance_tag(s) + ": vertex defect at iteration " + std::to_string(pt.iter));
            }
        }
        auto o = cl.outcome("50 solves; max relative total-weight error " + fmt("%.3g", worst_total) + ", max vertex defect " + fmt("%.3g", worst_defect));
        o.shared_seconds = uncharged_seconds(run, computed_now);
        return o;
    }

    Outcome convergence()
    {
        bool computed_now = ! regime_run.has_value();
        const auto &run = regime_solves();
        Clauses cl;
        double worst_ratio = 0.0, min_weight = 1.0;
        int max_iters = 0, found = 0, confirmed = 0, converged = 0;
        std::map<std::string, int> statuses;
        for (const auto &s : run.solves) {
            const auto &r = s.report;
            ++statuses[to_string(r.status)];
            const auto &tr = r.trajectory;
            for (std::size_t t = 3; t < tr.size(); ++t) {
                double ratio = tr[t].delta_inf / tr[t - 1].delta_inf;
                worst_ratio = std::max(worst_ratio, ratio);
                if (ratio > 0.9) {
                    cl.require(false, instance_tag(s) + ": ratio " + fmt("%.3f", ratio) + " at iteration " + std::to_string(t));
                    break;
                }
            }
            bool reached = ! tr.empty() && tr.back().delta_inf <= 1e-9 && r.iterations <= 100;
            converged += reached;
            cl.require(reached, instance_tag(s) + ": delta_inf " + (tr.empty() ? std::string("n/a") : fmt("%.3g", tr.back().delta_inf)) + " after " +
                                    std::to_string(r.iterations) + " iterations (" + to_string(r.status) + ")");
            max_iters = std::max(max_iters, r.iterations);
            min_weight = std::min(min_weight, r.final_report.min_weight);
            cl.require(r.final_report.min_weight >= -1e-9, instance_tag(s) + ": final min weight " + fmt("%.3g", r.final_report.min_weight));
            if (r.status == SolveStatus::ftd_found) {
                ++found;
                TriangleIndex ti(s.graph);
                bool ok = decide_ftd(s.graph, ti).verdict == Verdict::feasible;
                confirmed += ok;
                cl.require(ok, instance_tag(s) + ": FTD_FOUND not confirmed by the LP oracle");
            }
        }
        std::string hist;
        for (const auto &[k, v] : statuses)
            hist += (hist.empty() ? "" : " ") + k + "=" + std::to_string(v);
        auto o = cl.outcome("50 solves [" + hist + "]; " + std::to_string(converged) + " reach 1e-9 within 100 iterations (max " + std::to_string(max_iters) +
                            "); worst ratio from iteration 2: " + fmt("%.3f", worst_ratio) + "; min final weight " + fmt("%.3g", min_weight) + "; LP confirms " +
                            std::to_string(confirmed) + "/" + std::to_string(found) + " FTD_FOUND");
        o.shared_seconds = uncharged_seconds(run, computed_now);
        return o;
    }

    // 7. Oracle soundness and agreement with exact arithmetic.
    Outcome oracle_soundness()
    {
        Clauses cl;
        std::map<std::string, int> verdicts;
        for (std::uint64_t s = 0; s < 1000; ++s) {
            CounterRng rng(20000 + s);
            Vertex n = 5 + static_cast<Vertex>(rng() % 56);
            double c = 0.5 + 1.5 * rng.uniform01();
            double p = std::min(1.0, c * p_delta(n));
            Graph g = gen_gnp(n, p, rng());
            TriangleIndex ti(g);
            auto r = decide_ftd(g, ti, {.force_lp = s % 3 == 0});
            ++verdicts[to_string(r.verdict)];
            cl.require(verify_certificate(g, ti, r), "n=" + std::to_string(n) + " c=" + fmt("%.2f", c) + ": " + to_string(r.verdict) + " not verified");
        }
        int agree = 0, feasible = 0, tableau_agree = 0;
        for (std::uint64_t s = 0; s < 10000; ++s) {
            CounterRng rng(40000 + s);
            Vertex n = 3 + static_cast<Vertex>(s % 5);
            double p = 0.3 + 0.7 * rng.uniform01();
            Graph g = gen_gnp(n, p, rng());
            TriangleIndex ti(g);
            auto fl = decide_ftd(g, ti, {.force_lp = s % 2 == 0});
            auto ex = decide_ftd(g, ti, {.force_lp = true, .exact = true});
            bool f = fl.verdict == Verdict::feasible, e = ex.verdict == Verdict::feasible;
            bool decided = fl.verdict != Verdict::inconclusive && ex.verdict != Verdict::inconclusive;
            agree += decided && f == e;
            feasible += e;
            tableau_agree += exact_tableau_feasible(g, ti) == e;
            cl.require(decided && f == e, "n=" + std::to_string(n) + " small-graph seed " + std::to_string(40000 + s) + ": float " + to_string(fl.verdict) + " vs exact " +
                                              to_string(ex.verdict));
        }
        cl.require(tableau_agree == 10000, "library exact mode disagrees with the independent tableau on " + std::to_string(10000 - tableau_agree) + " graphs");
        std::string hist;
        for (const auto &[k, v] : verdicts)
            hist += (hist.empty() ? "" : " ") + k + "=" + std::to_string(v);
        return cl.outcome("1000 instances verified [" + hist + "]; " + std::to_string(agree) + "/10000 small graphs agree (" + std::to_string(feasible) + " feasible)");
    }

    // 8. Threshold scan at n = 300.
    Outcome threshold()
    {
        Clauses cl;
        ScanConfig cfg{.n = 300, .c_grid = {0.8, 1.0, 1.3}, .trials = 50, .seed = 1};
        auto rows = threshold_scan(cfg);
        int anomalies = 0;
        std::string table;
        for (const auto &r : rows) {
            cl.require(r.uncovered + r.ftd + r.anomaly == r.trials && r.trials == 50, "c=" + fmt("%.2f", r.c) + ": buckets do not sum to trials");
            anomalies += r.anomaly;
            table += " c=" + fmt("%.1f", r.c) + ":" + std::to_string(r.uncovered) + "/" + std::to_string(r.ftd) + "/" + std::to_string(r.anomaly);
            if (r.c == 0.8)
                cl.require(r.uncovered >= 35, "uncovered fraction at c=0.8 is " + std::to_string(r.uncovered) + "/50");
            if (r.c == 1.3)
                cl.require(r.ftd >= 35, "FTD fraction at c=1.3 is " + std::to_string(r.ftd) + "/50");
        }
        cl.require(anomalies <= 2, std::to_string(anomalies) + " anomalies");
        return cl.outcome("uncovered/ftd/anomaly" + table + "; anomalies " + std::to_string(anomalies));
    }

    // 9. Hitting time at n = 200.
    Outcome hitting()
    {
        Clauses cl;
        auto recs = hitting_time_trials(200, 20, 1);
        int feasible = 0;
        for (const auto &r : recs)
            feasible += r.verdict == Verdict::feasible;
        cl.require(recs.size() == 20, "trial count");
        cl.require(feasible >= 18, std::to_string(feasible) + "/20 feasible at tau");
        return cl.outcome(std::to_string(feasible) + "/20 FEASIBLE at tau");
    }

    // 10. Complete graphs.
    Outcome complete_graphs()
    {
        Clauses cl;
        for (Vertex n = 4; n <= 12; ++n) {
            auto r = solve(Graph::complete(n));
            double want = 1.0 / static_cast<double>(n - 2);
            double err = 0.0;
            for (double x : r.weighting.values)
                err = std::max(err, std::abs(x - want));
            cl.require(r.status == SolveStatus::ftd_found && r.iterations == 0, "K" + std::to_string(n) + ": " + to_string(r.status) + " after " + std::to_string(r.iterations));
            cl.require(r.final_report.delta_inf <= 1e-12, "K" + std::to_string(n) + ": delta_inf " + fmt("%.3g", r.final_report.delta_inf));
            cl.require(err <= 1e-15, "K" + std::to_string(n) + ": weight error " + fmt("%.3g", err));
        }
        return cl.outcome("K4..K12 exact with 0 iterations");
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--criterion", only, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    std::vector<Criterion> all{
        {1, "gadget identities", 60, gadget_identities},
        {2, "aggregated F equals labeled-pinwheel enumeration", 120, aggregation_oracle},
        {3, "counting cross-checks", 10, counts},
        {4, "rooted density and degeneracy suite", 60, combinatorial_suite},
        {5, "conservation invariants", 600, conservation},
        {6, "convergence", 900, convergence},
        {7, "oracle soundness", 600, oracle_soundness},
        {8, "threshold scan n=300", 1800, threshold},
        {9, "hitting time n=200", 1200, hitting},
        {10, "complete graphs", 5, complete_graphs},
    };

    int failed = 0;
    for (const auto &c : all) {
        if (! only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        }
        catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        double elapsed = seconds_since(t0) + o.shared_seconds;
        bool in_time = elapsed < c.limit_seconds;
        bool pass = o.pass && in_time;
        failed += ! pass;
        std::printf("criterion %2d %s  %s  (%.1f s, limit %.0f s%s)  %s\n", c.id, pass ? "PASS" : "FAIL", c.name.c_str(), elapsed, c.limit_seconds,
                    in_time ? "" : ", TOO SLOW", o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
