#include "ftd/solver.hpp"

#include "ftd/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ftd
{
    namespace
    {
        using clock_type = std::chrono::steady_clock;

        double seconds_since(clock_type::time_point start)
        {
            return std::chrono::duration<double>(clock_type::now() - start).count();
        }

        TrajectoryPoint point(const Graph &g, const TriangleIndex &ti, const Weighting &sigma, int iter, const Weighting *previous)
        {
            auto r = report(g, ti, sigma);
            TrajectoryPoint p;
            p.iter = iter;
            p.delta_inf = r.delta_inf;
            p.min_weight = r.min_weight;
            p.max_vertex_defect = r.max_vertex_defect;
            p.total_weight = r.total_weight;
            if (previous)
                for (std::size_t t = 0; t < sigma.size(); ++t)
                    p.step_inf = std::max(p.step_inf, std::abs(sigma[t] - (*previous)[t]));
            p.neighbourhood_disc = neighbourhood_discrepancy(g, ti, sigma);
            return p;
        }
    }

    void SolveOptions::validate() const
    {
        if (k < 2)
            throw InvalidInput("k must be at least 2");
        if (! (eps_stop > 0.0))
            throw InvalidInput("eps_stop must be positive");
        if (! (eps_neg >= 0.0))
            throw InvalidInput("eps_neg must be non-negative");
        if (max_iters < 1)
            throw InvalidInput("max_iters must be at least 1");
    }

    std::string to_string(SolveStatus s)
    {
        switch (s) {
        case SolveStatus::ftd_found:
            return "FTD_FOUND";
        case SolveStatus::stalled:
            return "STALLED";
        case SolveStatus::gadget_missing:
            return "GADGET_MISSING";
        case SolveStatus::uncovered_edge:
            return "UNCOVERED_EDGE";
        case SolveStatus::max_iters:
            return "MAX_ITERS";
        case SolveStatus::negative_weights:
            return "NEGATIVE_WEIGHTS";
        }
        return "UNKNOWN";
    }

    double neighbourhood_discrepancy(const Graph &g, const TriangleIndex &ti, const Weighting &sigma)
    {
        auto disc = edge_discrepancies(ti, sigma);
        double worst = 0.0;
        for (const Edge &e : g.edges()) {
            auto common = g.common_neighbors(e.u, e.v);
            for (Vertex a : {e.u, e.v}) {
                double s = 0.0;
                for_each_bit(common, [&](Vertex z) { s += disc[static_cast<std::size_t>(*g.edge_id(a, z))]; });
                worst = std::max(worst, std::abs(s));
            }
        }
        return worst;
    }

    SolveReport solve(const Graph &g, const SolveOptions &opts)
    {
        TriangleIndex ti(g);
        return solve(g, ti, opts);
    }

    SolveReport solve(const Graph &g, const TriangleIndex &ti, const SolveOptions &opts)
    {
        opts.validate();
        auto start = clock_type::now();
        SolveReport rep;
        auto finish = [&](SolveStatus status, std::string message) {
            rep.status = status;
            rep.message = std::move(message);
            rep.final_report = report(g, ti, rep.weighting);
            rep.wall_seconds = seconds_since(start);
            return rep;
        };

        auto uncovered = uncovered_edges(g, ti);
        if (! uncovered.empty()) {
            rep.witness_edge = uncovered.front();
            rep.weighting = Weighting(ti.size(), 0.0);
            return finish(SolveStatus::uncovered_edge,
                          "edge " + std::to_string(uncovered.front().u) + "-" + std::to_string(uncovered.front().v) + " lies in no triangle");
        }
        if (ti.empty())
            return finish(SolveStatus::ftd_found, "empty graph");

        // Stage 1.
        auto t0 = clock_type::now();
        rep.weighting = uniform_weighting(g, ti);
        rep.stage1 = report(g, ti, rep.weighting);
        rep.stage1_seconds = seconds_since(t0);

        // Stage 2.
        t0 = clock_type::now();
        if (rep.stage1->max_vertex_defect <= opts.eps_stop) {
            rep.stage2_skipped = true;
        }
        else {
            try {
                rep.weighting = bowtie_balance(g, ti, rep.weighting, opts.threads);
            }
            catch (const GadgetMissing &e) {
                rep.witness_pair = e.ordered_pair;
                rep.stage2_seconds = seconds_since(t0);
                return finish(SolveStatus::gadget_missing, e.what());
            }
        }
        rep.stage2 = report(g, ti, rep.weighting);
        rep.stage2_seconds = seconds_since(t0);

        std::vector<TrajectoryPoint> trajectory{point(g, ti, rep.weighting, 0, nullptr)};
        auto done = [&] {
            if (opts.record_trajectory)
                rep.trajectory = trajectory;
            rep.iterations = trajectory.back().iter;
            double d = trajectory.back().delta_inf;
            if (d > opts.eps_stop)
                return finish(SolveStatus::max_iters, "delta_inf still above eps_stop after max_iters");
            if (trajectory.back().min_weight < -opts.eps_neg)
                return finish(SolveStatus::negative_weights, "discrepancy converged but some weights are negative");
            return finish(SolveStatus::ftd_found, "");
        };
        if (trajectory.back().delta_inf <= opts.eps_stop)
            return done();

        // Stage 3.
        std::optional<PinwheelOperator> pinwheels;
        if (opts.op == Operator::pinwheel) {
            t0 = clock_type::now();
            pinwheels.emplace(g, ti, PinwheelOperator::Options{.k = opts.k, .threads = opts.threads, .matrix_budget = opts.matrix_budget});
            rep.pin_seconds = seconds_since(t0);
            const auto &pins = pinwheels->pin_counts();
            auto [lo, hi] = std::minmax_element(pins.begin(), pins.end());
            rep.min_pin_count = *lo;
            rep.max_pin_count = *hi;
            if (auto e = pinwheels->missing_edge()) {
                rep.witness_edge = e;
                if (opts.record_trajectory)
                    rep.trajectory = trajectory;
                return finish(SolveStatus::gadget_missing, "no pinwheel on edge " + std::to_string(e->u) + "-" + std::to_string(e->v));
            }
        }

        t0 = clock_type::now();
        for (int iter = 1; iter <= opts.max_iters; ++iter) {
            Weighting next = pinwheels ? pinwheels->apply(rep.weighting) : naive_adjust(g, ti, rep.weighting);
            trajectory.push_back(point(g, ti, next, iter, &rep.weighting));
            rep.weighting = std::move(next);
            if (trajectory.back().delta_inf <= opts.eps_stop)
                break;
            // Less than 1% progress over the last 10 iterations.
            if (iter >= 10 && trajectory.back().delta_inf > 0.99 * trajectory[static_cast<std::size_t>(iter - 10)].delta_inf) {
                rep.stage3_seconds = seconds_since(t0);
                if (opts.record_trajectory)
                    rep.trajectory = trajectory;
                rep.iterations = iter;
                return finish(SolveStatus::stalled, "delta_inf decreased by less than 1% over 10 iterations");
            }
        }
        rep.stage3_seconds = seconds_since(t0);
        return done();
    }

    StageDiagnostics stage_diagnostics(const Graph &g, double p, int k, int threads)
    {
        StageDiagnostics d;
        d.n = g.num_vertices();
        d.p = p;
        d.k = k;
        double n = d.n;
        d.bowtie_expected = std::pow(n, 5) * std::pow(p, 10);
        d.pinwheel_expected = 2.0 * std::pow(n, 2 * k - 1) * std::pow(p, 4 * k - 1);

        auto relative = [](double lo, double hi, double expected) {
            if (expected == 0.0)
                return (lo == 0.0 && hi == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
            return std::max(std::abs(lo - expected), std::abs(hi - expected)) / expected;
        };

        if (d.n >= 2) {
            std::vector<std::int64_t> lo(static_cast<std::size_t>(d.n)), hi(static_cast<std::size_t>(d.n));
            parallel_for(static_cast<std::size_t>(d.n), threads, [&](std::size_t ui) {
                auto u = static_cast<Vertex>(ui);
                std::int64_t mn = std::numeric_limits<std::int64_t>::max(), mx = 0;
                for (Vertex v = 0; v < d.n; ++v) {
                    if (v == u)
                        continue;
                    auto c = bowtie_count(g, u, v);
                    mn = std::min(mn, c);
                    mx = std::max(mx, c);
                }
                lo[ui] = mn;
                hi[ui] = mx;
            });
            d.bowtie_min = *std::min_element(lo.begin(), lo.end());
            d.bowtie_max = *std::max_element(hi.begin(), hi.end());
            d.all_bowties_positive = d.bowtie_min > 0;
            d.bowtie_deviation = relative(static_cast<double>(d.bowtie_min), static_cast<double>(d.bowtie_max), d.bowtie_expected);
        }

        if (g.num_edges() > 0) {
            TriangleIndex ti(g);
            // Counting only: a zero budget keeps the operator from storing matrices.
            PinwheelOperator op(g, ti, {.k = k, .threads = threads, .matrix_budget = 0});
            const auto &pins = op.pin_counts();
            auto [lo, hi] = std::minmax_element(pins.begin(), pins.end());
            d.pinwheel_min = *lo;
            d.pinwheel_max = *hi;
            d.all_pinwheels_positive = d.pinwheel_min > 0;
            d.pinwheel_deviation = relative(static_cast<double>(d.pinwheel_min), static_cast<double>(d.pinwheel_max), d.pinwheel_expected);
        }
        return d;
    }

    void write_trajectory(std::ostream &out, const std::vector<TrajectoryPoint> &trajectory, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        out << "iter,delta_inf,min_weight,max_vertex_defect,total_weight\n";
        char buf[256];
        for (const auto &p : trajectory) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", p.iter, p.delta_inf, p.min_weight, p.max_vertex_defect, p.total_weight);
            out << buf;
        }
    }
}
