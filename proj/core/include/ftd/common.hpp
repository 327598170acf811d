#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ftd
{
    using Vertex = std::int32_t;
    using EdgeId = std::int32_t;
    using TriangleId = std::int32_t;

    /// Unordered vertex pair, stored with u < v.
    struct Edge
    {
        Vertex u = 0;
        Vertex v = 0;

        Edge() = default;
        Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

        auto operator<=>(const Edge &) const = default;
    };

    /// Vertex triple, stored sorted u < v < w.
    struct Triangle
    {
        Vertex u = 0;
        Vertex v = 0;
        Vertex w = 0;

        Triangle() = default;
        Triangle(Vertex a, Vertex b, Vertex c);

        auto operator<=>(const Triangle &) const = default;
        bool contains(Vertex x) const { return x == u || x == v || x == w; }
    };

    inline Triangle::Triangle(Vertex a, Vertex b, Vertex c)
    {
        if (a > b)
            std::swap(a, b);
        if (b > c)
            std::swap(b, c);
        if (a > b)
            std::swap(a, b);
        u = a;
        v = b;
        w = c;
    }

    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InvalidInput : public Error
    {
    public:
        using Error::Error;
    };

    class InvalidEdge : public Error
    {
    public:
        explicit InvalidEdge(Edge e) :
            Error("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " is not in the graph"), edge(e)
        {
        }

        Edge edge;
    };

    class NoTriangles : public Error
    {
    public:
        using Error::Error;
    };

    /// A gadget family needed by a stage has no member at some edge or vertex pair.
    class GadgetMissing : public Error
    {
    public:
        GadgetMissing(const std::string &what, std::optional<Edge> e, std::optional<std::pair<Vertex, Vertex>> pair = std::nullopt) :
            Error(what), edge(e), ordered_pair(pair)
        {
        }

        std::optional<Edge> edge;
        std::optional<std::pair<Vertex, Vertex>> ordered_pair;
    };

    class ParseError : public Error
    {
    public:
        using Error::Error;
    };

    class SizeLimit : public Error
    {
    public:
        using Error::Error;
    };

    /// Raised by guards that refuse work beyond the configured instance size.
    class CapacityExceeded : public Error
    {
    public:
        using Error::Error;
    };
}
