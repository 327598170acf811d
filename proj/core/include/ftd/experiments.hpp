#pragma once

#include "ftd/lp_oracle.hpp"
#include "ftd/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftd
{
    /// Largest expected triangle count the scan and hitting experiments accept.
    constexpr double oracle_triangle_capacity = 5e4;

    /// p_Delta = sqrt(3 log n / (2 n)).
    double p_delta(Vertex n);

    /// Expected number of triangles in G(n, p).
    double expected_triangles(Vertex n, double p);

    enum class DecisionMethod
    {
        lp,
        solver,
        both,
    };

    DecisionMethod parse_decision_method(const std::string &s);
    std::string to_string(DecisionMethod m);

    struct ScanConfig
    {
        Vertex n = 300;
        std::vector<double> c_grid{0.8, 1.0, 1.3};
        int trials = 50;
        std::uint64_t seed = 1;
        /// lp: the oracle decides. solver: FTD_FOUND decides. both: the oracle decides and solver disagreements are counted.
        DecisionMethod method = DecisionMethod::lp;
        int threads = 1;
        /// Record mean decision time; off by default so identical configs give identical CSV.
        bool timing = false;
        SolveOptions solve;

        /// Throws InvalidInput on bad values and CapacityExceeded if some grid point is beyond oracle capacity.
        void validate() const;
    };

    struct ScanRow
    {
        double c = 0.0;
        double p = 0.0;
        int trials = 0;
        int uncovered = 0;
        int ftd = 0;
        /// Every edge covered but no FTD; ORACLE_INCONCLUSIVE trials are counted here too.
        int anomaly = 0;
        int inconclusive = 0;
        /// Method "both": trials on which the solver did not reach FTD_FOUND although the oracle found an FTD.
        int solver_misses = 0;
        double mean_seconds = 0.0;
        std::uint64_t seed = 0;
    };

    /// Trial t of every grid point samples G(n, c p_Delta) with seed base ^ t, so graphs are nested in c.
    std::vector<ScanRow> threshold_scan(const ScanConfig &cfg);

    struct HittingRecord
    {
        int trial = 0;
        std::uint64_t seed = 0;
        std::int64_t tau = 0;
        Verdict verdict = Verdict::inconclusive;
        std::optional<Verdict> verdict_plus_10;
        std::optional<Verdict> verdict_plus_50;
    };

    /// Runs the random graph process to the first time every edge is in a triangle and decides FTD there.
    std::vector<HittingRecord> hitting_time_trials(Vertex n, int trials, std::uint64_t seed, bool later_steps = false, int threads = 1);

    struct ProfileRun
    {
        std::uint64_t seed = 0;
        SolveStatus status = SolveStatus::ftd_found;
        std::string message;
        std::vector<TrajectoryPoint> trajectory;
    };

    struct ProfileResult
    {
        Vertex n = 0;
        double p = 0.0;
        /// Set when n p^2 < 4, outside the regime the gadget counts are designed for.
        std::optional<std::string> warning;
        std::vector<ProfileRun> runs;
    };

    /// Solves G(n, p) for each seed with trajectory recording. Gadget failures are recorded, not thrown.
    ProfileResult convergence_profile(Vertex n, double p, const std::vector<std::uint64_t> &seeds, SolveOptions opts = {}, int threads = 1);

    void write_scan_csv(std::ostream &out, Vertex n, const std::vector<ScanRow> &rows, const std::vector<std::string> &comments = {});
    void write_hitting_csv(std::ostream &out, Vertex n, const std::vector<HittingRecord> &records, const std::vector<std::string> &comments = {});
    /// Columns seed, status, iter, delta_inf, min_weight, max_vertex_defect, total_weight.
    void write_profile_csv(std::ostream &out, const ProfileResult &profile, const std::vector<std::string> &comments = {});
}
