#include "support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <unistd.h>

using namespace ftd;
using namespace ftd::testing;

namespace
{
    std::vector<std::string> labels_of(const RootedPattern &p, const std::vector<Vertex> &vs)
    {
        std::vector<std::string> out;
        for (Vertex v : vs)
            out.push_back(p.label(v));
        return out;
    }

    RootedPattern with_extra_edge(const RootedPattern &p, const std::string &a, const std::string &b)
    {
        std::vector<Edge> edges(p.graph.edges().begin(), p.graph.edges().end());
        edges.emplace_back(p.vertex(a), p.vertex(b));
        RootedPattern q = p;
        q.graph = Graph::from_edges(p.num_vertices(), edges);
        return q;
    }

    struct TempDir
    {
        std::filesystem::path path;
        TempDir() : path(std::filesystem::temp_directory_path() / ("ftd_pv_" + std::to_string(::getpid())))
        {
            std::filesystem::create_directories(path);
        }
        ~TempDir() { std::filesystem::remove_all(path); }
    };
}

TEST_CASE("rooted densities of the reference patterns")
{
    RootedPattern w2 = family_w(2).with_roots({"d", "a7", "b6", "a2"});
    auto d = max_root_density(w2);
    CHECK(d.ratio == Ratio(11, 4));
    auto want = std::vector<std::string>{"a0", "a1", "c_a", "c_b"};
    auto got = labels_of(w2, d.witness);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);

    RootedPattern w8 = wheel(4);
    auto dw = max_root_density(w8);
    CHECK(dw.ratio == Ratio(15, 7));
    CHECK(dw.witness == w8.free_vertices());
    CHECK(check_alpha(w8, Ratio(15, 7)));
    CHECK_FALSE(check_alpha(w8, Ratio(15, 7) - Ratio(1, 100)));

    RootedPattern k3;
    k3.graph = Graph::complete(3);
    auto dk = max_root_density(k3);
    CHECK(dk.ratio == Ratio(1));
    CHECK(dk.witness.size() == 3);
}

TEST_CASE("density search agrees with direct subset listing")
{
    std::vector<RootedPattern> pats{wheel(4), bowtie_pattern(), family_w(3), wheel_segment(4), wheel(3)};
    for (auto &c : p_cases())
        if (pats.size() < 15)
            pats.push_back(c.pattern);
    for (const auto &p : pats)
        CHECK(max_root_density(p).ratio == brute_max_density(p));
}

TEST_CASE("density search limits")
{
    RootedPattern big;
    big.graph = Graph::complete(25);
    CHECK_THROWS_AS(max_root_density(big), SizeLimit);
    RootedPattern closed = wheel(4);
    closed.roots.resize(static_cast<std::size_t>(closed.num_vertices()));
    std::iota(closed.roots.begin(), closed.roots.end(), 0);
    CHECK_THROWS_AS(max_root_density(closed), InvalidInput);
    CHECK(parse_ratio("11/4") == Ratio(11, 4));
    CHECK(parse_ratio("3") == Ratio(3));
    CHECK_THROWS_AS(parse_ratio("x/4"), InvalidInput);
    CHECK_THROWS_AS(parse_ratio("1/0"), InvalidInput);
}

TEST_CASE("degeneracy orderings")
{
    for (int t = 1; t <= 6; ++t) {
        RootedPattern seg = wheel_segment(t);
        auto order = is_k_degenerate(seg, 2);
        REQUIRE(order.has_value());
        std::vector<std::string> expected{"c"};
        for (int i = 1; i < t; ++i)
            expected.push_back("w" + std::to_string(i));
        CHECK(labels_of(seg, *order) == expected);
    }

    RootedPattern k3;
    k3.graph = Graph::complete(3);
    k3.roots = {0};
    CHECK(is_k_degenerate(k3, 2).has_value());

    RootedPattern k5;
    k5.graph = Graph::complete(5);
    CHECK_FALSE(is_k_degenerate(k5, 3).has_value());
    CHECK(is_k_degenerate(k5, 4).has_value());

    RootedPattern bow = bowtie_pattern();
    for (auto roots : std::vector<std::vector<std::string>>{{"u", "a1", "a2"}, {"v", "b1", "b2"}, {"c", "a1", "a2"}, {"c", "b1", "b2"}})
        CHECK(is_k_degenerate(bow.with_roots(roots), 2).has_value());
}

TEST_CASE("degeneracy bounds density")
{
    std::vector<RootedPattern> pats{wheel(4), bowtie_pattern(), wheel(3), family_w(5)};
    for (int t = 1; t <= 6; ++t)
        pats.push_back(wheel_segment(t));
    for (auto &c : q_cases())
        pats.push_back(c.pattern);
    for (const auto &p : pats)
        for (int k = 1; k <= 6; ++k)
            if (is_k_degenerate(p, k))
                CHECK(max_root_density(p).ratio <= Ratio(k));
}

TEST_CASE("density is monotone under edge addition")
{
    RootedPattern w = family_w(4);
    auto base = max_root_density(w).ratio;
    auto free = w.free_vertices();
    int added = 0;
    for (std::size_t i = 0; i < free.size() && added < 12; ++i)
        for (Vertex x = 0; x < w.num_vertices() && added < 12; ++x) {
            if (x == free[i] || w.graph.has_edge(x, free[i]))
                continue;
            auto more = with_extra_edge(w, w.label(free[i]), w.label(x));
            CHECK(max_root_density(more).ratio >= base);
            ++added;
        }
    CHECK(added == 12);
}

TEST_CASE("the built-in suite passes")
{
    auto report = verify_standard_suite({.threads = 1});
    CHECK(report.count("fail") == 0);
    CHECK(report.count("skipped") == 12);
    int p = 0, q = 0;
    for (const auto &row : report.rows) {
        p += row.id.rfind("P(", 0) == 0 && row.verdict == "pass";
        q += row.id.rfind("Q(", 0) == 0 && row.verdict == "pass";
        if (row.id.rfind("H", 0) == 0)
            CHECK(row.verdict == "skipped");
    }
    CHECK(p == 37);
    CHECK(q == 12);

    std::ostringstream csv;
    write_suite_csv(csv, report);
    std::istringstream in(csv.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "case,family,roots,alpha/k,verdict,witness");
}

TEST_CASE("a corrupted W(2) is caught")
{
    auto corrupted = [](int i) {
        RootedPattern w = family_w(i);
        return i == 2 ? with_extra_edge(w, "c_a", "c_b") : w;
    };
    int failed = 0;
    for (const auto &c : p_cases(corrupted))
        failed += ! check_alpha(c.pattern, Ratio(11, 4));
    CHECK(failed >= 1);
    auto report = verify_standard_suite({.w_family = corrupted});
    CHECK(report.count("fail") >= 1);
}

TEST_CASE("supplied H patterns are checked")
{
    TempDir dir;
    RootedPattern h = family_w(2);
    h.name = "H1";
    h.roots.clear();
    // R = {d, a7}; G = the first wheel's free part; O = the rest.
    std::vector<Vertex> r{h.vertex("d"), h.vertex("a7")}, gcls, o;
    for (const char *l : {"a0", "a1", "c_a"})
        gcls.push_back(h.vertex(l));
    for (Vertex v = 0; v < h.num_vertices(); ++v)
        if (std::find(r.begin(), r.end(), v) == r.end() && std::find(gcls.begin(), gcls.end(), v) == gcls.end())
            o.push_back(v);
    h.classes = {{'R', r}, {'G', gcls}, {'O', o}, {'P', {}}, {'B', {}}};
    {
        std::ofstream f(dir.path / "H1.pat");
        write_pattern(f, h);
    }
    std::ofstream(dir.path / "H2.pat") << "broken\n3 x\n";

    CHECK_THROWS_WITH_AS(verify_standard_suite({.h_dir = dir.path}), doctest::Contains("H2.pat"), ParseError);
    std::filesystem::remove(dir.path / "H2.pat");

    auto report = verify_standard_suite({.h_dir = dir.path});
    CHECK(report.count("skipped") == 10);
    for (const auto &row : report.rows)
        if (row.id == "H1-1" || row.id == "H1-2")
            CHECK(row.verdict == "pass");
}

TEST_CASE("pattern text format")
{
    RootedPattern w = family_wij(1, 7);
    std::stringstream ss;
    write_pattern(ss, w);
    RootedPattern r = read_pattern(ss);
    CHECK(r.num_vertices() == w.num_vertices());
    CHECK(r.roots == w.roots);
    CHECK(r.labels == w.labels);
    CHECK(std::equal(r.graph.edges().begin(), r.graph.edges().end(), w.graph.edges().begin(), w.graph.edges().end()));

    std::istringstream bad_root("p\n3 1\n0 1\nS: 5\n");
    CHECK_THROWS(read_pattern(bad_root));
}
