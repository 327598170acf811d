#include "ftd/pattern.hpp"

#include "ftd/text_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace ftd
{
    namespace
    {
        /// Accumulates labelled vertices and de-duplicated edges.
        class Builder
        {
        public:
            Vertex add(const std::string &label)
            {
                auto [it, inserted] = _ids.emplace(label, static_cast<Vertex>(_labels.size()));
                if (inserted)
                    _labels.push_back(label);
                return it->second;
            }

            Vertex id(const std::string &label) const
            {
                auto it = _ids.find(label);
                if (it == _ids.end())
                    throw InvalidInput("unknown pattern vertex " + label);
                return it->second;
            }

            void edge(const std::string &a, const std::string &b) { _edges.emplace(id(a), id(b)); }

            /// Wheel with the given perimeter labels in cyclic order and centre label.
            void wheel(const std::vector<std::string> &perimeter, const std::string &centre)
            {
                for (std::size_t i = 0; i < perimeter.size(); ++i) {
                    edge(perimeter[i], perimeter[(i + 1) % perimeter.size()]);
                    edge(perimeter[i], centre);
                }
            }

            RootedPattern finish(std::string name, const std::vector<std::string> &roots) const
            {
                RootedPattern p;
                p.name = std::move(name);
                std::vector<Edge> edges(_edges.begin(), _edges.end());
                p.graph = Graph::from_edges(static_cast<Vertex>(_labels.size()), edges);
                p.labels = _labels;
                for (const auto &r : roots)
                    p.roots.push_back(id(r));
                p.validate();
                return p;
            }

        private:
            std::map<std::string, Vertex> _ids;
            std::vector<std::string> _labels;
            std::set<Edge> _edges;
        };

        std::vector<std::string> numbered(const std::string &prefix, int from, int to)
        {
            std::vector<std::string> out;
            for (int i = from; i <= to; ++i)
                out.push_back(prefix + std::to_string(i));
            return out;
        }

        void check_range(const std::string &what, int value, int lo, int hi)
        {
            if (value < lo || value > hi)
                throw InvalidInput(what + " = " + std::to_string(value) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }

        Builder build_w(int i)
        {
            check_range("i", i, 1, 7);
            Builder b;
            for (const auto &l : numbered("a", 0, 7))
                b.add(l);
            b.add("c_a");
            for (const auto &l : numbered("b", 1, 6))
                b.add(l);
            b.add("c_b");
            b.add("d");
            b.wheel(numbered("a", 0, 7), "c_a");
            std::vector<std::string> bs;
            for (int j = 0; j <= 7; ++j)
                bs.push_back(b_label(i, j));
            b.wheel(bs, "c_b");
            b.edge("d", "a0");
            b.edge("d", "a7");
            return b;
        }

        bool in_t(int i, int j)
        {
            auto t = index_set_t();
            return std::find(t.begin(), t.end(), IndexPair{i, j}) != t.end();
        }
    }

    std::string RootedPattern::label(Vertex v) const
    {
        if (static_cast<std::size_t>(v) < labels.size())
            return labels[static_cast<std::size_t>(v)];
        return std::to_string(v);
    }

    Vertex RootedPattern::vertex(const std::string &l) const
    {
        for (Vertex v = 0; v < num_vertices(); ++v)
            if (label(v) == l)
                return v;
        throw InvalidInput("pattern " + name + " has no vertex " + l);
    }

    std::vector<Vertex> RootedPattern::free_vertices() const
    {
        std::vector<char> root(static_cast<std::size_t>(num_vertices()), 0);
        for (Vertex r : roots)
            root[static_cast<std::size_t>(r)] = 1;
        std::vector<Vertex> out;
        for (Vertex v = 0; v < num_vertices(); ++v)
            if (! root[static_cast<std::size_t>(v)])
                out.push_back(v);
        return out;
    }

    void RootedPattern::validate() const
    {
        std::vector<int> seen(static_cast<std::size_t>(num_vertices()), 0);
        for (Vertex r : roots) {
            if (r < 0 || r >= num_vertices())
                throw InvalidInput("pattern " + name + ": root " + std::to_string(r) + " out of range");
            if (seen[static_cast<std::size_t>(r)]++)
                throw InvalidInput("pattern " + name + ": root " + std::to_string(r) + " repeated");
        }
        if (! labels.empty() && labels.size() != static_cast<std::size_t>(num_vertices()))
            throw InvalidInput("pattern " + name + ": label count does not match vertex count");
        if (classes.empty())
            return;
        std::fill(seen.begin(), seen.end(), 0);
        for (const auto &[cls, members] : classes)
            for (Vertex v : members) {
                if (v < 0 || v >= num_vertices())
                    throw InvalidInput("pattern " + name + ": class member " + std::to_string(v) + " out of range");
                if (seen[static_cast<std::size_t>(v)]++)
                    throw InvalidInput("pattern " + name + ": vertex " + std::to_string(v) + " in more than one class");
            }
        for (Vertex v = 0; v < num_vertices(); ++v)
            if (! seen[static_cast<std::size_t>(v)])
                throw InvalidInput("pattern " + name + ": vertex " + std::to_string(v) + " in no class");
    }

    RootedPattern RootedPattern::with_roots(const std::vector<std::string> &root_labels) const
    {
        RootedPattern p = *this;
        p.roots.clear();
        for (const auto &l : root_labels)
            p.roots.push_back(vertex(l));
        p.validate();
        return p;
    }

    RootedPattern RootedPattern::induced(const std::vector<Vertex> &keep, std::vector<Vertex> new_roots) const
    {
        std::vector<Vertex> map(static_cast<std::size_t>(num_vertices()), -1);
        for (std::size_t i = 0; i < keep.size(); ++i)
            map[static_cast<std::size_t>(keep[i])] = static_cast<Vertex>(i);
        RootedPattern p;
        p.name = name;
        std::vector<Edge> edges;
        for (const Edge &e : graph.edges())
            if (map[static_cast<std::size_t>(e.u)] >= 0 && map[static_cast<std::size_t>(e.v)] >= 0)
                edges.emplace_back(map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)]);
        p.graph = Graph::from_edges(static_cast<Vertex>(keep.size()), edges);
        for (Vertex v : keep)
            p.labels.push_back(label(v));
        for (Vertex r : new_roots) {
            if (map[static_cast<std::size_t>(r)] < 0)
                throw InvalidInput("root outside the induced subpattern");
            p.roots.push_back(map[static_cast<std::size_t>(r)]);
        }
        p.validate();
        return p;
    }

    std::uint64_t rooted_extension_count(const RootedPattern &p, const Graph &g, const std::vector<Vertex> &phi)
    {
        p.validate();
        if (phi.size() != p.roots.size())
            throw InvalidInput("root placement has " + std::to_string(phi.size()) + " vertices, pattern has " + std::to_string(p.roots.size()) + " roots");
        auto n = static_cast<std::size_t>(g.num_vertices());
        std::vector<char> used(n, 0);
        for (Vertex x : phi) {
            if (x < 0 || x >= g.num_vertices())
                throw InvalidInput("root placement vertex " + std::to_string(x) + " out of range");
            if (used[static_cast<std::size_t>(x)]++)
                throw InvalidInput("root placement is not injective");
        }

        const Graph &h = p.graph;
        auto hn = static_cast<std::size_t>(h.num_vertices());
        std::vector<Vertex> image(hn, -1);
        std::vector<char> placed(hn, 0);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            image[static_cast<std::size_t>(p.roots[i])] = phi[i];
            placed[static_cast<std::size_t>(p.roots[i])] = 1;
        }

        // Place free vertices most-constrained first: most already-placed neighbours, then smallest id.
        std::vector<Vertex> order;
        std::vector<char> ordered = placed;
        for (std::size_t step = 0; step < hn - phi.size(); ++step) {
            Vertex best = -1;
            int best_links = -1;
            for (Vertex x = 0; x < h.num_vertices(); ++x) {
                if (ordered[static_cast<std::size_t>(x)])
                    continue;
                int links = 0;
                for (Vertex y : h.neighbors(x))
                    links += ordered[static_cast<std::size_t>(y)];
                if (links > best_links) {
                    best = x;
                    best_links = links;
                }
            }
            order.push_back(best);
            ordered[static_cast<std::size_t>(best)] = 1;
        }

        std::size_t words = g.words();
        std::vector<std::vector<Word>> candidates(order.size(), std::vector<Word>(words));
        std::vector<Word> all(words, 0);
        for (std::size_t v = 0; v < n; ++v)
            all[v / 64] |= Word{1} << (v % 64);

        std::uint64_t count = 0;
        auto rec = [&](auto &self, std::size_t depth) -> void {
            if (depth == order.size()) {
                ++count;
                return;
            }
            Vertex x = order[depth];
            auto &cand = candidates[depth];
            cand = all;
            for (Vertex y : h.neighbors(x)) {
                Vertex gy = image[static_cast<std::size_t>(y)];
                if (gy < 0)
                    continue;
                auto row = g.neighbor_bits(gy);
                for (std::size_t w = 0; w < words; ++w)
                    cand[w] &= row[w];
            }
            for (std::size_t w = 0; w < words; ++w)
                for (Word bits = cand[w]; bits; bits &= bits - 1) {
                    auto gx = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
                    if (used[static_cast<std::size_t>(gx)])
                        continue;
                    used[static_cast<std::size_t>(gx)] = 1;
                    image[static_cast<std::size_t>(x)] = gx;
                    self(self, depth + 1);
                    image[static_cast<std::size_t>(x)] = -1;
                    used[static_cast<std::size_t>(gx)] = 0;
                }
        };
        rec(rec, 0);
        return count;
    }

    RootedPattern wheel(int k)
    {
        check_range("k", k, 2, 32);
        Builder b;
        auto perimeter = numbered("w", 0, 2 * k - 1);
        for (const auto &l : perimeter)
            b.add(l);
        b.add("c");
        b.wheel(perimeter, "c");
        return b.finish("W_" + std::to_string(2 * k), {"w0", "w" + std::to_string(2 * k - 1)});
    }

    RootedPattern wheel_segment(int t)
    {
        check_range("t", t, 1, 6);
        RootedPattern w8 = wheel(4);
        std::vector<Vertex> keep;
        for (int i = 0; i < t; ++i)
            keep.push_back(w8.vertex("w" + std::to_string(i)));
        keep.push_back(w8.vertex("w7"));
        keep.push_back(w8.vertex("c"));
        RootedPattern p = w8.induced(keep, {w8.vertex("w0"), w8.vertex("w7")});
        p.name = "W_8[Q_" + std::to_string(t) + "]";
        return p;
    }

    RootedPattern bowtie_pattern()
    {
        Builder b;
        for (const char *l : {"u", "v", "a1", "a2", "b1", "b2", "c"})
            b.add(l);
        for (auto [x, y] : {std::pair{"u", "a1"}, {"u", "a2"}, {"a1", "a2"}, {"a1", "c"}, {"a2", "c"}, {"v", "b1"}, {"v", "b2"}, {"b1", "b2"}, {"b1", "c"}, {"b2", "c"}})
            b.edge(x, y);
        return b.finish("bowtie", {"u", "v"});
    }

    std::string b_label(int i, int j)
    {
        check_range("i", i, 1, 7);
        check_range("j", j, 0, 7);
        if (j == 0)
            return "a" + std::to_string(i - 1);
        if (j == 7)
            return "a" + std::to_string(i);
        return "b" + std::to_string(j);
    }

    std::string theta_label(int i, int j, int m)
    {
        check_range("m", m, 0, 7);
        if (m == 0)
            return b_label(i, j - 1);
        if (m == 7)
            return b_label(i, j);
        return "theta" + std::to_string(m);
    }

    RootedPattern family_w(int i)
    {
        return build_w(i).finish("W(" + std::to_string(i) + ")", {"d", "a7"});
    }

    RootedPattern family_wij(int i, int j)
    {
        if (! in_t(i, j))
            throw InvalidInput("W(i,j) is defined for (i,j) in {(1,2),(1,7)}, got (" + std::to_string(i) + "," + std::to_string(j) + ")");
        Builder b = build_w(i);
        for (const auto &l : numbered("theta", 1, 6))
            b.add(l);
        b.add("c_theta");
        std::vector<std::string> thetas;
        for (int m = 0; m <= 7; ++m)
            thetas.push_back(theta_label(i, j, m));
        b.wheel(thetas, "c_theta");
        return b.finish("W(" + std::to_string(i) + "," + std::to_string(j) + ")", {"d", "a7"});
    }

    std::vector<IndexPair> index_set_t() { return {{1, 2}, {1, 7}}; }

    std::vector<IndexPair> index_set_v() { return {{1, 1}, {2, 1}, {6, 7}}; }

    std::vector<IndexPair> index_set_p()
    {
        auto t = index_set_t();
        auto v = index_set_v();
        std::vector<IndexPair> out;
        for (int i = 1; i <= 6; ++i)
            for (int j = 1; j <= 7; ++j) {
                IndexPair ij{i, j};
                if (std::find(t.begin(), t.end(), ij) == t.end() && std::find(v.begin(), v.end(), ij) == v.end())
                    out.push_back(ij);
            }
        return out;
    }

    std::vector<IndexTriple> index_set_q()
    {
        std::vector<IndexTriple> out;
        for (int m = 2; m <= 7; ++m)
            out.push_back({1, 2, m});
        for (int m = 1; m <= 6; ++m)
            out.push_back({1, 7, m});
        return out;
    }

    RootedPattern build_family(const std::string &name, const std::vector<int> &params)
    {
        auto need = [&](std::size_t count) {
            if (params.size() != count)
                throw InvalidInput("family " + name + " takes " + std::to_string(count) + " parameter(s)");
        };
        if (name == "wheel") {
            need(1);
            return wheel(params[0]);
        }
        if (name == "segment") {
            need(1);
            return wheel_segment(params[0]);
        }
        if (name == "bowtie") {
            need(0);
            return bowtie_pattern();
        }
        if (name == "W") {
            need(1);
            return family_w(params[0]);
        }
        if (name == "W2") {
            need(2);
            return family_wij(params[0], params[1]);
        }
        throw InvalidInput("unknown family " + name + " (expected wheel, segment, bowtie, W, W2)");
    }

    RootedPattern read_pattern(std::istream &in)
    {
        LineReader reader(in);
        RootedPattern p;
        if (! reader.next())
            throw ParseError("line 1: expected pattern name");
        for (const auto &f : reader.fields())
            p.name += (p.name.empty() ? "" : " ") + f;

        auto header = reader.expect_fields(2, "header \"n m\"");
        auto n = parse_int<Vertex>(header[0], reader.line_number());
        auto m = parse_int<std::int64_t>(header[1], reader.line_number());
        if (n < 0 || m < 0)
            throw ParseError("line " + std::to_string(reader.line_number()) + ": negative size");
        std::vector<Edge> edges;
        for (std::int64_t i = 0; i < m; ++i) {
            auto f = reader.expect_fields(2, "edge \"u v\"");
            auto u = parse_int<Vertex>(f[0], reader.line_number());
            auto v = parse_int<Vertex>(f[1], reader.line_number());
            if (u < 0 || v < 0 || u >= n || v >= n || u == v)
                throw ParseError("line " + std::to_string(reader.line_number()) + ": bad edge");
            edges.emplace_back(u, v);
        }
        try {
            p.graph = Graph::from_edges(n, edges);
        }
        catch (const InvalidInput &e) {
            throw ParseError(e.what());
        }

        auto ids = [&](std::size_t from) {
            std::vector<Vertex> out;
            for (std::size_t i = from; i < reader.fields().size(); ++i) {
                auto v = parse_int<Vertex>(reader.fields()[i], reader.line_number());
                if (v < 0 || v >= n)
                    throw ParseError("line " + std::to_string(reader.line_number()) + ": vertex " + std::to_string(v) + " out of range");
                out.push_back(v);
            }
            return out;
        };
        bool have_roots = false;
        while (reader.next()) {
            const auto &f = reader.fields();
            auto line = std::to_string(reader.line_number());
            if (f[0] == "S:") {
                p.roots = ids(1);
                have_roots = true;
            }
            else if (f[0] == "class" && f.size() >= 2 && f[1].size() == 2 && f[1][1] == ':' && std::string("RGOPB").find(f[1][0]) != std::string::npos) {
                p.classes[f[1][0]] = ids(2);
            }
            else if (f[0] == "mark" && (f.size() >= 2) && (f[1] == "sigma:" || f[1] == "beta:")) {
                p.marks[f[1].substr(0, f[1].size() - 1)] = ids(2);
            }
            else if (f[0] == "labels:") {
                if (f.size() != static_cast<std::size_t>(n) + 1)
                    throw ParseError("line " + line + ": expected one label per vertex");
                p.labels.assign(f.begin() + 1, f.end());
            }
            else {
                throw ParseError("line " + line + ": unrecognised directive \"" + f[0] + "\"");
            }
        }
        if (! have_roots)
            throw ParseError("missing \"S:\" root line");
        try {
            p.validate();
        }
        catch (const InvalidInput &e) {
            throw ParseError(e.what());
        }
        return p;
    }

    RootedPattern read_pattern(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (! in)
            throw ParseError("cannot open " + path.string());
        try {
            return read_pattern(in);
        }
        catch (const ParseError &e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }

    void write_pattern(std::ostream &out, const RootedPattern &p)
    {
        out << (p.name.empty() ? "pattern" : p.name) << '\n';
        out << p.num_vertices() << ' ' << p.graph.num_edges() << '\n';
        for (const Edge &e : p.graph.edges())
            out << e.u << ' ' << e.v << '\n';
        out << "S:";
        for (Vertex r : p.roots)
            out << ' ' << r;
        out << '\n';
        for (const auto &[cls, members] : p.classes) {
            out << "class " << cls << ':';
            for (Vertex v : members)
                out << ' ' << v;
            out << '\n';
        }
        for (const auto &[mark, members] : p.marks) {
            out << "mark " << mark << ':';
            for (Vertex v : members)
                out << ' ' << v;
            out << '\n';
        }
        if (! p.labels.empty()) {
            out << "labels:";
            for (const auto &l : p.labels)
                out << ' ' << l;
            out << '\n';
        }
    }
}
