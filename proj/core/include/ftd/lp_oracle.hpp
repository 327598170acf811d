#pragma once

#include "ftd/graph.hpp"
#include "ftd/weighting.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftd
{
    enum class Verdict
    {
        feasible,
        infeasible,
        uncovered,
        inconclusive,
    };

    std::string to_string(Verdict v);

    /// Outcome of the FTD feasibility LP {A rho = 1, rho >= 0}, A the edge x triangle incidence matrix.
    struct FeasibilityResult
    {
        Verdict verdict = Verdict::inconclusive;
        /// Witness when feasible.
        Weighting weighting;
        /// Farkas vector over edge ids when infeasible: every triangle sums to <= 1e-12, total >= 1.
        std::vector<double> certificate;
        /// First uncovered edge when uncovered.
        std::optional<Edge> uncovered_edge;
        /// "trivial", "projection", "presolve", "simplex" or "exact".
        std::string method;
        std::string message;
        std::int64_t iterations = 0;
        double seconds = 0.0;
    };

    struct OracleOptions
    {
        /// Skip the uncovered-edge shortcut and send every instance through the LP.
        bool force_lp = false;
        /// Try projecting the uniform weighting onto the feasible set before the simplex.
        bool projection_first = true;
        int projection_rounds = 100;
        /// Exact rational arithmetic; allowed for n <= 12.
        bool exact = false;
        double pivot_tol = 1e-10;
        double feasibility_tol = 1e-9;
    };

    constexpr double certificate_column_tol = 1e-12;
    constexpr Vertex exact_vertex_limit = 12;

    /// Decides whether G has an FTD. Never returns a verdict its own check rejects: such cases are inconclusive.
    FeasibilityResult decide_ftd(const Graph &g, const TriangleIndex &ti, const OracleOptions &opts = {});

    /// Re-checks a result from scratch: witness feasibility within 1e-9, or the Farkas inequalities.
    bool verify_certificate(const Graph &g, const TriangleIndex &ti, const FeasibilityResult &result);

    /// "farkas n" followed by "u v y" for every nonzero entry.
    void write_certificate(std::ostream &out, const Graph &g, const FeasibilityResult &result, const std::vector<std::string> &comments = {});
}
