#include "exact_simplex.hpp"

namespace ftd::detail
{
    ExactPhaseOneResult exact_phase_one(const BinaryColumns &a)
    {
        auto m = static_cast<std::size_t>(a.rows);
        auto n = static_cast<std::size_t>(a.cols());
        std::size_t cols = n + m;
        std::size_t rhs = cols;

        // Row i: structural columns, then the artificial for row i, then the right-hand side 1.
        std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1));
        for (std::size_t j = 0; j < n; ++j)
            for (auto k = a.start[j]; k < a.start[j + 1]; ++k)
                t[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])][j] = 1;
        for (std::size_t i = 0; i < m; ++i) {
            t[i][n + i] = 1;
            t[i][rhs] = 1;
        }
        std::vector<std::size_t> basis(m);
        for (std::size_t i = 0; i < m; ++i)
            basis[i] = n + i;

        // Reduced costs of the phase-one objective (sum of artificials) and its negated value.
        std::vector<Rational> d(cols + 1);
        for (std::size_t j = 0; j < cols; ++j)
            d[j] = j >= n ? 1 : 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j <= cols; ++j)
                if (! t[i][j].is_zero())
                    d[j] -= t[i][j];

        ExactPhaseOneResult res;
        for (;;) {
            std::size_t q = cols;
            for (std::size_t j = 0; j < cols; ++j)
                if (d[j] < 0) {
                    q = j;
                    break;
                }
            if (q == cols)
                break;

            std::size_t r = m;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (t[i][q] <= 0)
                    continue;
                Rational ratio = t[i][rhs] / t[i][q];
                if (r == m || ratio < best || (ratio == best && basis[i] < basis[r])) {
                    r = i;
                    best = ratio;
                }
            }
            if (r == m)
                break; // unreachable: the phase-one objective is bounded below

            Rational piv = t[r][q];
            for (auto &v : t[r])
                if (! v.is_zero())
                    v /= piv;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == r || t[i][q].is_zero())
                    continue;
                Rational f = t[i][q];
                for (std::size_t j = 0; j <= cols; ++j)
                    if (! t[r][j].is_zero())
                        t[i][j] -= f * t[r][j];
            }
            if (! d[q].is_zero()) {
                Rational f = d[q];
                for (std::size_t j = 0; j <= cols; ++j)
                    if (! t[r][j].is_zero())
                        d[j] -= f * t[r][j];
            }
            basis[r] = q;
            ++res.pivots;
        }

        // d[rhs] holds minus the objective value.
        res.feasible = d[rhs].is_zero();
        if (res.feasible) {
            res.x.assign(n, Rational(0));
            for (std::size_t i = 0; i < m; ++i)
                if (basis[i] < n)
                    res.x[basis[i]] = t[i][rhs];
        }
        else {
            res.y.resize(m);
            for (std::size_t i = 0; i < m; ++i)
                res.y[i] = Rational(1) - d[n + i];
        }
        return res;
    }
}
