#pragma once

#include "sparse_simplex.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <vector>

namespace ftd::detail
{
    using Rational = boost::multiprecision::mpq_rational;

    struct ExactPhaseOneResult
    {
        bool feasible = false;
        /// Structural values of a basic feasible solution when feasible.
        std::vector<Rational> x;
        /// Farkas vector when infeasible: y^T A_j <= 0 for every column and sum y > 0.
        std::vector<Rational> y;
        std::int64_t pivots = 0;
    };

    /// Phase one on a dense rational tableau with Bland's rule, for {A x = 1, x >= 0}.
    ExactPhaseOneResult exact_phase_one(const BinaryColumns &a);
}
