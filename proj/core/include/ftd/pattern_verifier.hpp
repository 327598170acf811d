#pragma once

#include "ftd/pattern.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ftd
{
    using Ratio = boost::rational<std::int64_t>;

    constexpr int density_free_limit = 24;

    struct DensityResult
    {
        /// max over nonempty W of (e(H[S u W]) - e(H[S])) / |W|.
        Ratio ratio;
        /// Maximiser with the fewest vertices, then lexicographically smallest; ascending ids.
        std::vector<Vertex> witness;
    };

    /// Exhaustive over all subsets of V(H) \ S. Throws SizeLimit above 24 free vertices and InvalidInput with none.
    DensityResult max_root_density(const RootedPattern &p);

    /// True iff max_root_density(p) <= alpha.
    bool check_alpha(const RootedPattern &p, Ratio alpha);

    /// Ordering of V(H) \ S in which every vertex has at most k neighbours in S and before it, if one exists.
    std::optional<std::vector<Vertex>> is_k_degenerate(const RootedPattern &p, int k);

    struct SuiteRow
    {
        std::string id;
        std::string family;
        std::string roots;
        /// "alpha=11/4" or "k=2".
        std::string criterion;
        /// "pass", "fail" or "skipped".
        std::string verdict;
        /// Density witness set or degeneracy ordering, as labels.
        std::string witness;
        std::string detail;
    };

    SuiteRow check_density(std::string id, const RootedPattern &p, Ratio alpha);
    SuiteRow check_degeneracy(std::string id, const RootedPattern &p, int k);

    struct SuiteCase
    {
        std::string id;
        RootedPattern pattern;
    };

    /// The 37 cases (i, j) in P: W(i) rooted at {d, a7, b_{j-1}, b_j}.
    std::vector<SuiteCase> p_cases(const std::function<RootedPattern(int)> &w_family = family_w);
    /// The 12 cases (i, j, m) in Q: W(i, j) rooted at {d, a7, theta_{m-1}, theta_m}.
    std::vector<SuiteCase> q_cases();

    /// "11/4" or "3"; throws InvalidInput otherwise.
    Ratio parse_ratio(const std::string &s);

    struct SuiteReport
    {
        std::vector<SuiteRow> rows;

        int count(const std::string &verdict) const;
        bool all_passed() const { return count("fail") == 0; }
    };

    struct SuiteOptions
    {
        /// Directory holding H1.pat .. H6.pat; rows for missing files are skipped.
        std::optional<std::filesystem::path> h_dir;
        /// Builder for W(i); replaceable to check that a perturbed family is caught.
        std::function<RootedPattern(int)> w_family = family_w;
        int threads = 1;
    };

    /// Every built-in rooted density and degeneracy condition of the gadget families, in a fixed order.
    SuiteReport verify_standard_suite(const SuiteOptions &opts = {});

    std::string format_labels(const RootedPattern &p, const std::vector<Vertex> &vs);
    std::string to_string(const Ratio &r);

    void write_suite_table(std::ostream &out, const SuiteReport &report);
    /// Columns: case, family, roots, alpha/k, verdict, witness.
    void write_suite_csv(std::ostream &out, const SuiteReport &report, const std::vector<std::string> &comments = {});
}
