#include "ftd/graph.hpp"
#include "ftd/text_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ftd
{
    Graph read_graph(std::istream &in)
    {
        LineReader reader(in);
        auto header = reader.expect_fields(2, "header \"n m\"");
        auto n = parse_int<Vertex>(header[0], reader.line_number());
        auto m = parse_int<std::int64_t>(header[1], reader.line_number());
        if (n < 0 || m < 0)
            throw ParseError("line " + std::to_string(reader.line_number()) + ": negative size");

        std::vector<Edge> edges;
        edges.reserve(static_cast<std::size_t>(m));
        for (std::int64_t i = 0; i < m; ++i) {
            auto f = reader.expect_fields(2, "edge \"u v\"");
            auto u = parse_int<Vertex>(f[0], reader.line_number());
            auto v = parse_int<Vertex>(f[1], reader.line_number());
            if (! (0 <= u && u < v && v < n))
                throw ParseError("line " + std::to_string(reader.line_number()) + ": edge must satisfy 0 <= u < v < n");
            edges.emplace_back(u, v);
        }
        if (reader.next())
            throw ParseError("line " + std::to_string(reader.line_number()) + ": trailing data after " + std::to_string(m) + " edges");
        try {
            return Graph::from_edges(n, edges);
        }
        catch (const InvalidInput &e) {
            throw ParseError(e.what());
        }
    }

    Graph read_graph(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (! in)
            throw ParseError("cannot open " + path.string());
        try {
            return read_graph(in);
        }
        catch (const ParseError &e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }

    void write_graph(std::ostream &out, const Graph &g, const std::vector<std::string> &comments)
    {
        for (const auto &c : comments)
            out << "# " << c << '\n';
        out << g.num_vertices() << ' ' << g.num_edges() << '\n';
        for (const Edge &e : g.edges())
            out << e.u << ' ' << e.v << '\n';
    }

    void write_process(std::ostream &out, const ProcessTrace &trace)
    {
        out << trace.n << '\n';
        std::int64_t step = 1;
        for (const Edge &e : trace.order)
            out << step++ << ' ' << e.u << ' ' << e.v << '\n';
        out << "tau " << trace.tau << '\n';
    }

    ProcessTrace read_process(std::istream &in)
    {
        LineReader reader(in);
        ProcessTrace trace;
        trace.n = parse_int<Vertex>(reader.expect_fields(1, "vertex count")[0], reader.line_number());
        if (trace.n < 3)
            throw ParseError("line " + std::to_string(reader.line_number()) + ": process needs n >= 3");
        auto pairs = static_cast<std::int64_t>(trace.n) * (trace.n - 1) / 2;
        for (std::int64_t i = 1; i <= pairs; ++i) {
            auto f = reader.expect_fields(3, "\"step u v\"");
            if (parse_int<std::int64_t>(f[0], reader.line_number()) != i)
                throw ParseError("line " + std::to_string(reader.line_number()) + ": expected step " + std::to_string(i));
            auto u = parse_int<Vertex>(f[1], reader.line_number());
            auto v = parse_int<Vertex>(f[2], reader.line_number());
            if (! (0 <= u && u < v && v < trace.n))
                throw ParseError("line " + std::to_string(reader.line_number()) + ": edge must satisfy 0 <= u < v < n");
            trace.order.emplace_back(u, v);
        }
        auto f = reader.expect_fields(2, "\"tau <value>\"");
        if (f[0] != "tau")
            throw ParseError("line " + std::to_string(reader.line_number()) + ": expected \"tau\"");
        trace.tau = parse_int<std::int64_t>(f[1], reader.line_number());
        return trace;
    }
}
