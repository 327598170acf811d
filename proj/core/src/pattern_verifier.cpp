#include "ftd/pattern_verifier.hpp"

#include "ftd/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace ftd
{
    namespace
    {
        const Ratio eleven_quarters(11, 4);

        std::vector<char> root_mask(const RootedPattern &p)
        {
            std::vector<char> is_root(static_cast<std::size_t>(p.num_vertices()), 0);
            for (Vertex r : p.roots)
                is_root[static_cast<std::size_t>(r)] = 1;
            return is_root;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char c : s)
                q += c == '"' ? std::string("\"\"") : std::string(1, c);
            return q + "\"";
        }

        std::vector<Vertex> class_members(const RootedPattern &p, const std::string &file, std::initializer_list<char> names)
        {
            std::vector<Vertex> out;
            for (char c : names) {
                auto it = p.classes.find(c);
                if (it == p.classes.end())
                    throw InvalidInput(file + ": pattern has no class " + std::string(1, c));
                out.insert(out.end(), it->second.begin(), it->second.end());
            }
            std::sort(out.begin(), out.end());
            return out;
        }
    }

    std::string to_string(const Ratio &r)
    {
        if (r.denominator() == 1)
            return std::to_string(r.numerator());
        return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
    }

    std::string format_labels(const RootedPattern &p, const std::vector<Vertex> &vs)
    {
        std::string s = "{";
        for (std::size_t i = 0; i < vs.size(); ++i)
            s += (i ? " " : "") + p.label(vs[i]);
        return s + "}";
    }

    DensityResult max_root_density(const RootedPattern &p)
    {
        p.validate();
        auto free = p.free_vertices();
        if (free.empty())
            throw InvalidInput(p.name + ": no free vertices");
        if (static_cast<int>(free.size()) > density_free_limit)
            throw SizeLimit(p.name + ": " + std::to_string(free.size()) + " free vertices exceed the exhaustive limit of " + std::to_string(density_free_limit));

        auto is_root = root_mask(p);
        auto f = free.size();
        std::vector<std::uint32_t> adj(f, 0);
        std::vector<int> root_degree(f, 0);
        std::vector<int> slot(static_cast<std::size_t>(p.num_vertices()), -1);
        for (std::size_t i = 0; i < f; ++i)
            slot[static_cast<std::size_t>(free[i])] = static_cast<int>(i);
        for (std::size_t i = 0; i < f; ++i)
            for (Vertex w : p.graph.neighbors(free[i])) {
                if (is_root[static_cast<std::size_t>(w)])
                    ++root_degree[i];
                else
                    adj[i] |= std::uint32_t{1} << slot[static_cast<std::size_t>(w)];
            }

        // gain[W] = e(H[S u W]) - e(H[S]), built by removing the lowest member of W.
        std::uint32_t full = static_cast<std::uint32_t>((std::uint64_t{1} << f) - 1);
        std::vector<std::uint16_t> gain(std::size_t{full} + 1, 0);
        std::uint32_t best = 0;
        std::int64_t best_gain = 0, best_size = 1;
        for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
            int low = std::countr_zero(mask);
            std::uint32_t rest = mask & (mask - 1);
            auto g = static_cast<std::int64_t>(gain[rest]) + std::popcount(adj[static_cast<std::size_t>(low)] & rest) + root_degree[static_cast<std::size_t>(low)];
            gain[mask] = static_cast<std::uint16_t>(g);
            std::int64_t size = std::popcount(mask);
            bool better = false;
            if (best == 0 || g * best_size > best_gain * size) {
                better = true;
            }
            else if (g * best_size == best_gain * size) {
                if (size < best_size)
                    better = true;
                else if (size == best_size) {
                    // Equal sizes: the set holding the smallest element of the symmetric difference is lexicographically first.
                    std::uint32_t diff = mask ^ best;
                    better = (mask & (diff & (~diff + 1))) != 0;
                }
            }
            if (better) {
                best = mask;
                best_gain = g;
                best_size = size;
            }
            if (mask == full)
                break;
        }

        DensityResult res;
        res.ratio = Ratio(best_gain, best_size);
        for (std::size_t i = 0; i < f; ++i)
            if (best >> i & 1U)
                res.witness.push_back(free[i]);
        return res;
    }

    bool check_alpha(const RootedPattern &p, Ratio alpha)
    {
        return max_root_density(p).ratio <= alpha;
    }

    std::optional<std::vector<Vertex>> is_k_degenerate(const RootedPattern &p, int k)
    {
        p.validate();
        std::vector<char> present(static_cast<std::size_t>(p.num_vertices()), 1);
        auto remaining = p.free_vertices();
        std::vector<Vertex> reversed;
        // Peel from the back: the last vertex only needs few neighbours among everything still present.
        while (! remaining.empty()) {
            std::size_t pick = remaining.size();
            int pick_degree = 0;
            for (std::size_t i = 0; i < remaining.size(); ++i) {
                int d = 0;
                for (Vertex w : p.graph.neighbors(remaining[i]))
                    d += present[static_cast<std::size_t>(w)];
                if (d <= k && (pick == remaining.size() || d < pick_degree)) {
                    pick = i;
                    pick_degree = d;
                }
            }
            if (pick == remaining.size())
                return std::nullopt;
            present[static_cast<std::size_t>(remaining[pick])] = 0;
            reversed.push_back(remaining[pick]);
            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
        }
        return std::vector<Vertex>(reversed.rbegin(), reversed.rend());
    }

    SuiteRow check_density(std::string id, const RootedPattern &p, Ratio alpha)
    {
        SuiteRow row{std::move(id), p.name, format_labels(p, p.roots), "alpha=" + to_string(alpha), "", "", ""};
        auto d = max_root_density(p);
        row.verdict = d.ratio <= alpha ? "pass" : "fail";
        row.witness = format_labels(p, d.witness);
        row.detail = "max=" + to_string(d.ratio);
        return row;
    }

    SuiteRow check_degeneracy(std::string id, const RootedPattern &p, int k)
    {
        SuiteRow row{std::move(id), p.name, format_labels(p, p.roots), "k=" + std::to_string(k), "", "", ""};
        auto order = is_k_degenerate(p, k);
        row.verdict = order ? "pass" : "fail";
        if (order) {
            std::string w;
            for (Vertex v : *order)
                w += (w.empty() ? "" : " ") + p.label(v);
            row.witness = w;
        }
        return row;
    }

    std::vector<SuiteCase> p_cases(const std::function<RootedPattern(int)> &w_family)
    {
        std::vector<SuiteCase> out;
        for (auto [i, j] : index_set_p())
            out.push_back({"P(" + std::to_string(i) + "," + std::to_string(j) + ")", w_family(i).with_roots({"d", "a7", b_label(i, j - 1), b_label(i, j)})});
        return out;
    }

    std::vector<SuiteCase> q_cases()
    {
        std::vector<SuiteCase> out;
        for (auto [i, j, m] : index_set_q())
            out.push_back({"Q(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(m) + ")",
                           family_wij(i, j).with_roots({"d", "a7", theta_label(i, j, m - 1), theta_label(i, j, m)})});
        return out;
    }

    Ratio parse_ratio(const std::string &s)
    {
        auto slash = s.find('/');
        try {
            std::size_t used = 0;
            if (slash == std::string::npos) {
                auto v = std::stoll(s, &used);
                if (used == s.size())
                    return Ratio(v);
            }
            else {
                std::string a = s.substr(0, slash), b = s.substr(slash + 1);
                std::size_t ua = 0, ub = 0;
                auto num = std::stoll(a, &ua);
                auto den = std::stoll(b, &ub);
                if (ua == a.size() && ub == b.size() && den != 0)
                    return Ratio(num, den);
            }
        }
        catch (const std::exception &) {
        }
        throw InvalidInput("expected a rational such as 11/4, got \"" + s + "\"");
    }

    int SuiteReport::count(const std::string &verdict) const
    {
        return static_cast<int>(std::count_if(rows.begin(), rows.end(), [&](const SuiteRow &r) { return r.verdict == verdict; }));
    }

    SuiteReport verify_standard_suite(const SuiteOptions &opts)
    {
        std::vector<std::function<SuiteRow()>> jobs;

        RootedPattern bowtie = bowtie_pattern();
        jobs.emplace_back([=] { return check_density("bowtie-uv", bowtie, Ratio(2)); });
        for (auto roots : std::vector<std::vector<std::string>>{{"u", "a1", "a2"}, {"v", "b1", "b2"}, {"c", "a1", "a2"}, {"c", "b1", "b2"}}) {
            std::string id = "bowtie-" + roots[0] + roots[1] + roots[2];
            jobs.emplace_back([=] { return check_degeneracy(id, bowtie.with_roots(roots), 2); });
        }

        RootedPattern w8 = wheel(4);
        jobs.emplace_back([=] { return check_density("W8-w0w7", w8, eleven_quarters); });
        jobs.emplace_back([=] { return check_density("W8-cw0w1", w8.with_roots({"c", "w0", "w1"}), eleven_quarters); });
        // Completion from Q_t holds for t <= 5 only; Q_6 leaves w6 with three edges into the root set.
        for (int t = 1; t <= 5; ++t) {
            std::vector<std::string> q{"w7"};
            for (int i = 0; i < t; ++i)
                q.push_back("w" + std::to_string(i));
            q.push_back("c");
            jobs.emplace_back([=] { return check_density("W8-Q" + std::to_string(t), w8.with_roots(q), eleven_quarters); });
        }
        for (int t = 1; t <= 6; ++t)
            jobs.emplace_back([=] { return check_degeneracy("W8[Q" + std::to_string(t) + "]-w0w7", wheel_segment(t), 2); });

        for (auto &c : p_cases(opts.w_family))
            jobs.emplace_back([c] { return check_density(c.id, c.pattern, eleven_quarters); });
        for (auto &c : q_cases())
            jobs.emplace_back([c] { return check_density(c.id, c.pattern, eleven_quarters); });

        {
            auto builder = opts.w_family;
            jobs.emplace_back([=] {
                RootedPattern w = builder(2).with_roots({"d", "a7", b_label(2, 6), b_label(2, 7)});
                SuiteRow row{"W2-remark", w.name, format_labels(w, w.roots), "max=11/4", "", "", ""};
                auto d = max_root_density(w);
                std::vector<Vertex> expected{w.vertex("c_a"), w.vertex("a0"), w.vertex("a1"), w.vertex("c_b")};
                std::sort(expected.begin(), expected.end());
                row.verdict = d.ratio == eleven_quarters && d.witness == expected ? "pass" : "fail";
                row.witness = format_labels(w, d.witness);
                row.detail = "max=" + to_string(d.ratio);
                return row;
            });
        }

        std::vector<SuiteRow> rows(jobs.size());
        parallel_for(jobs.size(), opts.threads, [&](std::size_t i) { rows[i] = jobs[i](); });

        for (int h = 1; h <= 6; ++h) {
            std::string name = "H" + std::to_string(h);
            std::optional<std::filesystem::path> file;
            if (opts.h_dir && std::filesystem::exists(*opts.h_dir / (name + ".pat")))
                file = *opts.h_dir / (name + ".pat");
            if (! file) {
                rows.push_back({name + "-1", name, "{}", "k=2", "skipped", "", "pattern file not supplied"});
                rows.push_back({name + "-2", name, "{}", "alpha=11/4", "skipped", "", "pattern file not supplied"});
                continue;
            }
            RootedPattern hp = read_pattern(*file);
            std::string where = file->string();
            auto red = class_members(hp, where, {'R'});
            auto red_green = class_members(hp, where, {'R', 'G'});
            RootedPattern first = hp.induced(red_green, red);
            first.name = name + "[G+R]";
            rows.push_back(check_degeneracy(name + "-1", first, 2));
            RootedPattern second = hp;
            second.roots = class_members(hp, where, {'R', 'G', 'O'});
            second.name = name;
            if (second.roots.size() == static_cast<std::size_t>(second.num_vertices()))
                rows.push_back({name + "-2", name, format_labels(second, second.roots), "alpha=11/4", "pass", "{}", "no free vertices"});
            else
                rows.push_back(check_density(name + "-2", second, eleven_quarters));
        }
        return SuiteReport{std::move(rows)};
    }

    void write_suite_table(std::ostream &out, const SuiteReport &report)
    {
        std::vector<std::array<std::string, 6>> cells{{"case", "family", "roots", "alpha/k", "verdict", "witness"}};
        for (const auto &r : report.rows)
            cells.push_back({r.id, r.family, r.roots, r.criterion, r.verdict, r.witness + (r.detail.empty() ? "" : "  " + r.detail)});
        std::array<std::size_t, 6> width{};
        for (const auto &row : cells)
            for (std::size_t c = 0; c < 6; ++c)
                width[c] = std::max(width[c], row[c].size());
        for (const auto &row : cells) {
            std::string line;
            for (std::size_t c = 0; c < 6; ++c) {
                line += row[c];
                if (c + 1 < 6)
                    line += std::string(width[c] - row[c].size() + 2, ' ');
            }
            while (! line.empty() && line.back() == ' ')
                line.pop_back();
            out << line << '\n';
        }
        out << report.count("pass") << " passed, " << report.count("fail") << " failed, " << report.count("skipped") << " skipped\n";
    }

    void write_suite_csv(std::ostream &out, const SuiteReport &report, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        out << "case,family,roots,alpha/k,verdict,witness\n";
        for (const auto &r : report.rows)
            out << csv_field(r.id) << ',' << csv_field(r.family) << ',' << csv_field(r.roots) << ',' << r.criterion << ',' << r.verdict << ','
                << csv_field(r.witness) << '\n';
    }
}
