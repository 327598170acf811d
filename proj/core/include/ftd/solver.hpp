#pragma once

#include "ftd/gadgets.hpp"
#include "ftd/graph.hpp"
#include "ftd/weighting.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftd
{
    enum class Operator
    {
        pinwheel,
        naive,
    };

    struct SolveOptions
    {
        /// Wheel half-length: pinwheels use 2k-cycles.
        int k = 4;
        double eps_stop = 1e-9;
        double eps_neg = 1e-9;
        int max_iters = 200;
        Operator op = Operator::pinwheel;
        bool record_trajectory = true;
        int threads = 1;
        std::size_t matrix_budget = std::size_t{1} << 25;

        /// Throws InvalidInput on out-of-range values.
        void validate() const;
    };

    enum class SolveStatus
    {
        ftd_found,
        stalled,
        gadget_missing,
        uncovered_edge,
        max_iters,
        /// Converged in discrepancy but some weight is below -eps_neg.
        negative_weights,
    };

    std::string to_string(SolveStatus s);

    struct TrajectoryPoint
    {
        int iter = 0;
        double delta_inf = 0.0;
        double min_weight = 0.0;
        double max_vertex_defect = 0.0;
        double total_weight = 0.0;
        /// max |phi_t - phi_{t-1}| over triangles (0 at iteration 0).
        double step_inf = 0.0;
        /// max over edges uv of |sum_{z in N(u) & N(v)} delta_uz|.
        double neighbourhood_disc = 0.0;
    };

    struct SolveReport
    {
        SolveStatus status = SolveStatus::max_iters;
        std::string message;
        std::optional<Edge> witness_edge;
        std::optional<std::pair<Vertex, Vertex>> witness_pair;

        Weighting weighting;
        /// Iteration 0 is the vertex-balanced weighting; iteration t is after t applications of the operator.
        std::vector<TrajectoryPoint> trajectory;
        int iterations = 0;
        bool stage2_skipped = false;

        std::optional<DiscrepancyReport> stage1;
        std::optional<DiscrepancyReport> stage2;
        DiscrepancyReport final_report;

        std::int64_t min_pin_count = 0;
        std::int64_t max_pin_count = 0;

        double stage1_seconds = 0.0;
        double stage2_seconds = 0.0;
        double pin_seconds = 0.0;
        double stage3_seconds = 0.0;
        double wall_seconds = 0.0;
    };

    /// Uniform weighting, bowtie balancing, then the discrepancy operator until eps_stop.
    SolveReport solve(const Graph &g, const SolveOptions &opts = {});
    SolveReport solve(const Graph &g, const TriangleIndex &ti, const SolveOptions &opts);

    /// Neighbourhood discrepancy: max over ordered edges uv of |sum_{z in N(u) & N(v)} delta_uz(sigma)|.
    double neighbourhood_discrepancy(const Graph &g, const TriangleIndex &ti, const Weighting &sigma);

    struct StageDiagnostics
    {
        Vertex n = 0;
        double p = 0.0;
        int k = 4;
        std::int64_t bowtie_min = 0;
        std::int64_t bowtie_max = 0;
        /// n^5 p^10.
        double bowtie_expected = 0.0;
        double bowtie_deviation = 0.0;
        std::int64_t pinwheel_min = 0;
        std::int64_t pinwheel_max = 0;
        /// 2 n^{2k-1} p^{4k-1}, i.e. 2 n^7 p^15 for k = 4.
        double pinwheel_expected = 0.0;
        double pinwheel_deviation = 0.0;
        bool all_bowties_positive = false;
        bool all_pinwheels_positive = false;
    };

    /// Gadget counts over all ordered vertex pairs and all edges against their expectations.
    StageDiagnostics stage_diagnostics(const Graph &g, double p, int k = 4, int threads = 1);

    /// CSV with columns iter, delta_inf, min_weight, max_vertex_defect, total_weight.
    void write_trajectory(std::ostream &out, const std::vector<TrajectoryPoint> &trajectory, const std::vector<std::string> &comments = {});
}
