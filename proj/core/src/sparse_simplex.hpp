#pragma once

#include <cstdint>
#include <vector>

namespace ftd::detail
{
    /// Column-compressed 0/1 matrix.
    struct BinaryColumns
    {
        int rows = 0;
        std::vector<std::int64_t> start{0};
        std::vector<int> index;

        int cols() const { return static_cast<int>(start.size()) - 1; }
    };

    struct SimplexOptions
    {
        double pivot_tol = 1e-10;
        double optimality_tol = 1e-9;
        double feasibility_tol = 1e-9;
        int refactor_interval = 64;
        /// Consecutive degenerate pivots before switching to Bland's rule.
        int degenerate_limit = 50;
        std::int64_t max_iterations = 0;
    };

    struct PhaseOneResult
    {
        enum class Outcome
        {
            optimal,
            iteration_limit,
            numerical_failure,
        };

        Outcome outcome = Outcome::numerical_failure;
        /// Sum of artificials at the end.
        double objective = 0.0;
        /// Structural values.
        std::vector<double> x;
        /// Row duals of the phase-one objective: y^T A_j <= tol for every column and y^T b = objective.
        std::vector<double> y;
        std::int64_t iterations = 0;
        std::int64_t bland_pivots = 0;
    };

    /**
     * Phase one of the revised primal simplex for {A x = b, x >= 0} with b >= 0, starting from the
     * all-artificial basis. Basis inverse: sparse LU of the last refactorised basis plus a product-form
     * eta file. Dantzig pricing, switching to Bland's rule after a run of degenerate pivots; Harris
     * two-pass ratio test outside Bland mode. Artificials never re-enter once they leave.
     */
    PhaseOneResult sparse_phase_one(const BinaryColumns &a, const std::vector<double> &b, const SimplexOptions &opts);
}
