#include "ftd/experiments.hpp"

#include "ftd/parallel.hpp"
#include "ftd/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ftd
{
    namespace
    {
        struct TrialOutcome
        {
            Verdict verdict = Verdict::inconclusive;
            bool solver_ftd = false;
            double seconds = 0.0;
        };

        TrialOutcome decide(const Graph &g, DecisionMethod method, const SolveOptions &solve_opts)
        {
            auto start = std::chrono::steady_clock::now();
            TriangleIndex ti(g);
            TrialOutcome out;
            if (method != DecisionMethod::solver)
                out.verdict = decide_ftd(g, ti).verdict;
            if (method != DecisionMethod::lp) {
                auto uncovered = uncovered_edges(g, ti);
                if (! uncovered.empty()) {
                    out.solver_ftd = false;
                    if (method == DecisionMethod::solver)
                        out.verdict = Verdict::uncovered;
                }
                else {
                    out.solver_ftd = solve(g, ti, solve_opts).status == SolveStatus::ftd_found;
                    if (method == DecisionMethod::solver)
                        out.verdict = out.solver_ftd ? Verdict::feasible : Verdict::inconclusive;
                }
            }
            out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return out;
        }

        std::string format_double(double x)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            return buf;
        }

        void check_capacity(Vertex n, double p, const std::string &what)
        {
            double expected = expected_triangles(n, p);
            if (expected > oracle_triangle_capacity) {
                char buf[256];
                std::snprintf(buf, sizeof buf, "%s: G(%d, %.6g) has about %.0f triangles, above the oracle capacity of %.0f; lower n or c", what.c_str(), n, p,
                              expected, oracle_triangle_capacity);
                throw CapacityExceeded(buf);
            }
        }
    }

    double p_delta(Vertex n)
    {
        if (n < 2)
            throw InvalidInput("p_Delta needs n >= 2");
        return std::sqrt(3.0 * std::log(static_cast<double>(n)) / (2.0 * n));
    }

    double expected_triangles(Vertex n, double p)
    {
        double nn = n;
        return nn * (nn - 1) * (nn - 2) / 6.0 * p * p * p;
    }

    DecisionMethod parse_decision_method(const std::string &s)
    {
        if (s == "lp")
            return DecisionMethod::lp;
        if (s == "solver")
            return DecisionMethod::solver;
        if (s == "both")
            return DecisionMethod::both;
        throw InvalidInput("unknown decision method \"" + s + "\" (expected lp, solver or both)");
    }

    std::string to_string(DecisionMethod m)
    {
        switch (m) {
        case DecisionMethod::lp:
            return "lp";
        case DecisionMethod::solver:
            return "solver";
        case DecisionMethod::both:
            return "both";
        }
        return "unknown";
    }

    void ScanConfig::validate() const
    {
        if (n < 3)
            throw InvalidInput("scan needs n >= 3");
        if (trials < 1)
            throw InvalidInput("trials must be at least 1");
        if (c_grid.empty())
            throw InvalidInput("empty c grid");
        for (double c : c_grid) {
            if (! (c > 0.0))
                throw InvalidInput("c values must be positive");
            if (c * p_delta(n) > 1.0)
                throw InvalidInput("c * p_Delta exceeds 1 for c = " + format_double(c));
        }
        solve.validate();
        if (method != DecisionMethod::solver)
            for (double c : c_grid)
                check_capacity(n, c * p_delta(n), "scan");
    }

    std::vector<ScanRow> threshold_scan(const ScanConfig &cfg)
    {
        cfg.validate();
        double pd = p_delta(cfg.n);
        std::vector<ScanRow> rows;
        for (double c : cfg.c_grid) {
            ScanRow row;
            row.c = c;
            row.p = c * pd;
            row.trials = cfg.trials;
            row.seed = cfg.seed;
            std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
            parallel_for(outcomes.size(), cfg.threads, [&](std::size_t t) {
                Graph g = gen_gnp(cfg.n, row.p, trial_seed(cfg.seed, t));
                outcomes[t] = decide(g, cfg.method, cfg.solve);
            });
            double total = 0.0;
            for (const auto &o : outcomes) {
                switch (o.verdict) {
                case Verdict::uncovered:
                    ++row.uncovered;
                    break;
                case Verdict::feasible:
                    ++row.ftd;
                    break;
                case Verdict::infeasible:
                    ++row.anomaly;
                    break;
                case Verdict::inconclusive:
                    ++row.anomaly;
                    ++row.inconclusive;
                    break;
                }
                if (cfg.method == DecisionMethod::both && o.verdict == Verdict::feasible && ! o.solver_ftd)
                    ++row.solver_misses;
                total += o.seconds;
            }
            row.mean_seconds = cfg.timing ? total / cfg.trials : 0.0;
            rows.push_back(row);
        }
        return rows;
    }

    std::vector<HittingRecord> hitting_time_trials(Vertex n, int trials, std::uint64_t seed, bool later_steps, int threads)
    {
        if (n < 3)
            throw InvalidInput("hitting-time trials need n >= 3");
        if (trials < 1)
            throw InvalidInput("trials must be at least 1");
        check_capacity(n, std::min(1.0, p_delta(n)), "hitting");
        std::vector<HittingRecord> records(static_cast<std::size_t>(trials));
        parallel_for(records.size(), threads, [&](std::size_t t) {
            HittingRecord &r = records[t];
            r.trial = static_cast<int>(t);
            r.seed = trial_seed(seed, t);
            ProcessTrace trace = gen_process(n, r.seed);
            r.tau = trace.tau;
            auto at = [&](std::int64_t step) {
                Graph g = trace.graph_at(std::min<std::int64_t>(step, static_cast<std::int64_t>(trace.order.size())));
                TriangleIndex ti(g);
                return decide_ftd(g, ti).verdict;
            };
            r.verdict = at(r.tau);
            if (later_steps) {
                r.verdict_plus_10 = at(r.tau + 10);
                r.verdict_plus_50 = at(r.tau + 50);
            }
        });
        return records;
    }

    ProfileResult convergence_profile(Vertex n, double p, const std::vector<std::uint64_t> &seeds, SolveOptions opts, int threads)
    {
        if (n < 1)
            throw InvalidInput("profile needs n >= 1");
        if (! (p >= 0.0 && p <= 1.0))
            throw InvalidInput("edge probability must lie in [0, 1]");
        opts.record_trajectory = true;
        opts.validate();
        ProfileResult res;
        res.n = n;
        res.p = p;
        double np2 = n * p * p;
        if (np2 < 4.0) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "n p^2 = %.3g is below 4; gadget counts may vanish and solves may report GADGET_MISSING", np2);
            res.warning = buf;
        }
        res.runs.resize(seeds.size());
        // Trials run in parallel; each solve stays single-threaded so the output is thread-count independent.
        opts.threads = 1;
        parallel_for(seeds.size(), threads, [&](std::size_t i) {
            ProfileRun &run = res.runs[i];
            run.seed = seeds[i];
            Graph g = gen_gnp(n, p, seeds[i]);
            auto rep = solve(g, opts);
            run.status = rep.status;
            run.message = rep.message;
            run.trajectory = std::move(rep.trajectory);
        });
        return res;
    }

    void write_scan_csv(std::ostream &out, Vertex n, const std::vector<ScanRow> &rows, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        out << "n,c,p,trials,uncovered,ftd,anomaly,seed,secs\n";
        for (const auto &r : rows)
            out << n << ',' << format_double(r.c) << ',' << format_double(r.p) << ',' << r.trials << ',' << r.uncovered << ',' << r.ftd << ',' << r.anomaly << ','
                << r.seed << ',' << format_double(r.mean_seconds) << '\n';
    }

    void write_hitting_csv(std::ostream &out, Vertex n, const std::vector<HittingRecord> &records, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        bool later = ! records.empty() && records.front().verdict_plus_10.has_value();
        out << "n,trial,seed,tau,verdict" << (later ? ",verdict_tau_plus_10,verdict_tau_plus_50" : "") << '\n';
        for (const auto &r : records) {
            out << n << ',' << r.trial << ',' << r.seed << ',' << r.tau << ',' << to_string(r.verdict);
            if (later)
                out << ',' << to_string(*r.verdict_plus_10) << ',' << to_string(*r.verdict_plus_50);
            out << '\n';
        }
    }

    void write_profile_csv(std::ostream &out, const ProfileResult &profile, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        if (profile.warning)
            out << "# warning: " << *profile.warning << '\n';
        for (const auto &run : profile.runs)
            if (run.status != SolveStatus::ftd_found)
                out << "# seed " << run.seed << ": " << to_string(run.status) << (run.message.empty() ? "" : " (" + run.message + ")") << '\n';
        out << "seed,status,iter,delta_inf,min_weight,max_vertex_defect,total_weight\n";
        for (const auto &run : profile.runs)
            for (const auto &p : run.trajectory)
                out << run.seed << ',' << to_string(run.status) << ',' << p.iter << ',' << format_double(p.delta_inf) << ',' << format_double(p.min_weight) << ','
                    << format_double(p.max_vertex_defect) << ',' << format_double(p.total_weight) << '\n';
    }
}
