#include "sparse_simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace ftd::detail
{
    namespace
    {
        struct Eta
        {
            int row;
            double pivot;
            std::vector<std::pair<int, double>> entries;
        };

        class Basis
        {
        public:
            Basis(const BinaryColumns &a, int structural) : _a(a), _n(structural) {}

            /// Factorises the basis whose position i holds variable `vars[i]`; false if singular.
            bool refactor(const std::vector<int> &vars)
            {
                _etas.clear();
                _identity = std::all_of(vars.begin(), vars.end(), [&](int v) { return v >= _n; }) && is_permutation_identity(vars);
                if (_identity)
                    return true;
                int m = _a.rows;
                std::vector<Eigen::Triplet<double>> trips;
                for (int i = 0; i < m; ++i) {
                    int v = vars[static_cast<std::size_t>(i)];
                    if (v >= _n) {
                        trips.emplace_back(v - _n, i, 1.0);
                        continue;
                    }
                    for (auto k = _a.start[static_cast<std::size_t>(v)]; k < _a.start[static_cast<std::size_t>(v) + 1]; ++k)
                        trips.emplace_back(_a.index[static_cast<std::size_t>(k)], i, 1.0);
                }
                Eigen::SparseMatrix<double> b(m, m);
                b.setFromTriplets(trips.begin(), trips.end());
                b.makeCompressed();
                _lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
                _lu->analyzePattern(b);
                _lu->factorize(b);
                return _lu->info() == Eigen::Success;
            }

            void ftran(std::vector<double> &x) const
            {
                if (! _identity) {
                    Eigen::Map<Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
                    Eigen::VectorXd r = _lu->solve(v);
                    v = r;
                }
                for (const Eta &e : _etas) {
                    double xr = x[static_cast<std::size_t>(e.row)] / e.pivot;
                    x[static_cast<std::size_t>(e.row)] = xr;
                    if (xr == 0.0)
                        continue;
                    for (auto [i, a] : e.entries)
                        x[static_cast<std::size_t>(i)] -= a * xr;
                }
            }

            void btran(std::vector<double> &y) const
            {
                for (auto it = _etas.rbegin(); it != _etas.rend(); ++it) {
                    double s = y[static_cast<std::size_t>(it->row)];
                    for (auto [i, a] : it->entries)
                        s -= a * y[static_cast<std::size_t>(i)];
                    y[static_cast<std::size_t>(it->row)] = s / it->pivot;
                }
                if (! _identity) {
                    Eigen::Map<Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
                    Eigen::VectorXd r = _lu->transpose().solve(v);
                    v = r;
                }
            }

            void push_eta(int row, const std::vector<double> &alpha)
            {
                Eta e{row, alpha[static_cast<std::size_t>(row)], {}};
                for (std::size_t i = 0; i < alpha.size(); ++i)
                    if (static_cast<int>(i) != row && alpha[i] != 0.0)
                        e.entries.emplace_back(static_cast<int>(i), alpha[i]);
                _etas.push_back(std::move(e));
            }

            std::size_t eta_count() const { return _etas.size(); }

        private:
            bool is_permutation_identity(const std::vector<int> &vars) const
            {
                for (std::size_t i = 0; i < vars.size(); ++i)
                    if (vars[i] != _n + static_cast<int>(i))
                        return false;
                return true;
            }

            const BinaryColumns &_a;
            int _n;
            bool _identity = true;
            std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> _lu;
            std::vector<Eta> _etas;
        };
    }

    PhaseOneResult sparse_phase_one(const BinaryColumns &a, const std::vector<double> &b, const SimplexOptions &opts)
    {
        int m = a.rows;
        int n = a.cols();
        auto um = static_cast<std::size_t>(m);
        PhaseOneResult res;
        res.x.assign(static_cast<std::size_t>(n), 0.0);
        res.y.assign(um, 0.0);

        std::int64_t limit = opts.max_iterations > 0 ? opts.max_iterations : 20 * (static_cast<std::int64_t>(m) + n) + 1000;

        std::vector<int> basis(um);
        std::vector<int> position(static_cast<std::size_t>(n) + um, -1);
        for (int i = 0; i < m; ++i) {
            basis[static_cast<std::size_t>(i)] = n + i;
            position[static_cast<std::size_t>(n + i)] = i;
        }
        std::vector<double> xb = b;

        Basis inv(a, n);
        inv.refactor(basis);

        auto is_artificial = [&](int v) { return v >= n; };
        auto refresh = [&]() {
            if (! inv.refactor(basis))
                return false;
            xb = b;
            inv.ftran(xb);
            for (double &v : xb)
                if (v < 0.0 && v > -opts.feasibility_tol)
                    v = 0.0;
            return true;
        };
        auto objective = [&]() {
            double s = 0.0;
            for (std::size_t i = 0; i < um; ++i)
                if (is_artificial(basis[i]))
                    s += xb[i];
            return s;
        };
        auto artificials_clear = [&]() {
            for (std::size_t i = 0; i < um; ++i)
                if (is_artificial(basis[i]) && xb[i] > opts.feasibility_tol * 1e-2)
                    return false;
            return true;
        };

        std::vector<double> y(um), alpha(um);
        int degenerate = 0;
        bool bland = false;
        int since_refactor = 0;
        res.outcome = PhaseOneResult::Outcome::optimal;

        for (res.iterations = 0;; ++res.iterations) {
            if (artificials_clear())
                break;
            if (res.iterations >= limit) {
                res.outcome = PhaseOneResult::Outcome::iteration_limit;
                break;
            }
            if (since_refactor >= opts.refactor_interval) {
                if (! refresh()) {
                    res.outcome = PhaseOneResult::Outcome::numerical_failure;
                    break;
                }
                since_refactor = 0;
            }

            // Pricing: d_j = -y^T A_j with y = B^-T c_B.
            for (std::size_t i = 0; i < um; ++i)
                y[i] = is_artificial(basis[i]) ? 1.0 : 0.0;
            inv.btran(y);
            int entering = -1;
            double best = -opts.optimality_tol;
            for (int j = 0; j < n; ++j) {
                if (position[static_cast<std::size_t>(j)] >= 0)
                    continue;
                double d = 0.0;
                for (auto k = a.start[static_cast<std::size_t>(j)]; k < a.start[static_cast<std::size_t>(j) + 1]; ++k)
                    d -= y[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])];
                if (d < best) {
                    entering = j;
                    if (bland)
                        break;
                    best = d;
                }
            }
            if (entering < 0)
                break;

            std::fill(alpha.begin(), alpha.end(), 0.0);
            for (auto k = a.start[static_cast<std::size_t>(entering)]; k < a.start[static_cast<std::size_t>(entering) + 1]; ++k)
                alpha[static_cast<std::size_t>(a.index[static_cast<std::size_t>(k)])] = 1.0;
            inv.ftran(alpha);

            int leave = -1;
            if (bland) {
                double theta = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < um; ++i) {
                    if (alpha[i] <= opts.pivot_tol)
                        continue;
                    double r = std::max(xb[i], 0.0) / alpha[i];
                    if (r < theta - 1e-14 || (r <= theta + 1e-14 && leave >= 0 && basis[i] < basis[static_cast<std::size_t>(leave)])) {
                        theta = std::min(theta, r);
                        leave = static_cast<int>(i);
                    }
                }
            }
            else {
                // Harris: bound the step with relaxed ratios, then take the largest pivot within it.
                double bound = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < um; ++i)
                    if (alpha[i] > opts.pivot_tol)
                        bound = std::min(bound, (std::max(xb[i], 0.0) + opts.feasibility_tol) / alpha[i]);
                double best_pivot = 0.0;
                for (std::size_t i = 0; i < um; ++i) {
                    if (alpha[i] <= opts.pivot_tol || std::max(xb[i], 0.0) / alpha[i] > bound)
                        continue;
                    bool art = is_artificial(basis[i]);
                    bool better = leave < 0 || (art && ! is_artificial(basis[static_cast<std::size_t>(leave)])) ||
                                  (art == is_artificial(basis[static_cast<std::size_t>(leave)]) && alpha[i] > best_pivot);
                    if (better) {
                        leave = static_cast<int>(i);
                        best_pivot = alpha[i];
                    }
                }
            }
            if (leave < 0) {
                // A descent direction with no blocking row contradicts a bounded objective: rounding trouble.
                if (since_refactor == 0) {
                    res.outcome = PhaseOneResult::Outcome::numerical_failure;
                    break;
                }
                since_refactor = opts.refactor_interval;
                continue;
            }

            auto r = static_cast<std::size_t>(leave);
            double theta = std::max(xb[r], 0.0) / alpha[r];
            for (std::size_t i = 0; i < um; ++i) {
                if (alpha[i] == 0.0)
                    continue;
                xb[i] -= theta * alpha[i];
                if (xb[i] < 0.0)
                    xb[i] = 0.0;
            }
            xb[r] = theta;
            position[static_cast<std::size_t>(basis[r])] = -1;
            basis[r] = entering;
            position[static_cast<std::size_t>(entering)] = leave;
            inv.push_eta(leave, alpha);
            ++since_refactor;
            if (bland)
                ++res.bland_pivots;

            if (theta <= 1e-12) {
                if (++degenerate >= opts.degenerate_limit)
                    bland = true;
            }
            else {
                degenerate = 0;
                bland = false;
            }
        }

        if (res.outcome != PhaseOneResult::Outcome::numerical_failure && ! refresh())
            res.outcome = PhaseOneResult::Outcome::numerical_failure;
        for (std::size_t i = 0; i < um; ++i) {
            y[i] = is_artificial(basis[i]) ? 1.0 : 0.0;
            if (! is_artificial(basis[i]))
                res.x[static_cast<std::size_t>(basis[i])] = xb[i];
        }
        if (res.outcome != PhaseOneResult::Outcome::numerical_failure)
            inv.btran(y);
        res.y = y;
        res.objective = objective();
        return res;
    }
}
