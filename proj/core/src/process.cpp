#include "ftd/graph.hpp"
#include "ftd/rng.hpp"

#include <algorithm>

namespace ftd
{
    Graph ProcessTrace::graph_at(std::int64_t step) const
    {
        if (step < 0 || step > static_cast<std::int64_t>(order.size()))
            throw InvalidInput("process step " + std::to_string(step) + " out of range");
        return Graph::from_edges(n, std::span<const Edge>(order.data(), static_cast<std::size_t>(step)));
    }

    ProcessTrace gen_process(Vertex n, std::uint64_t seed)
    {
        if (n < 3)
            throw InvalidInput("random graph process needs n >= 3");

        ProcessTrace trace;
        trace.n = n;
        auto un = static_cast<std::size_t>(n);
        trace.order.reserve(un * (un - 1) / 2);
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                trace.order.emplace_back(u, v);

        // Fisher-Yates with unbiased bounded draws.
        CounterRng rng(seed);
        for (std::size_t i = trace.order.size() - 1; i > 0; --i)
            std::swap(trace.order[i], trace.order[rng.below(i + 1)]);

        // Adding uv can only cover uv itself and the edges uw, vw for common neighbours w.
        std::size_t words = words_for(un);
        std::vector<Word> bits(un * words, 0);
        auto row = [&](Vertex v) { return bits.data() + static_cast<std::size_t>(v) * words; };
        auto pair_index = [&](Vertex u, Vertex v) {
            if (u > v)
                std::swap(u, v);
            auto a = static_cast<std::size_t>(u), b = static_cast<std::size_t>(v);
            return a * (2 * un - a - 1) / 2 + (b - a - 1);
        };
        std::vector<std::int32_t> cover(trace.order.size(), 0);
        std::int64_t uncovered = 0;
        auto bump = [&](Vertex a, Vertex b) {
            if (cover[pair_index(a, b)]++ == 0)
                --uncovered;
        };

        for (std::size_t i = 0; i < trace.order.size(); ++i) {
            auto [u, v] = trace.order[i];
            ++uncovered;
            const Word *ru = row(u);
            const Word *rv = row(v);
            for (std::size_t w = 0; w < words; ++w)
                for (Word common = ru[w] & rv[w]; common; common &= common - 1) {
                    auto x = static_cast<Vertex>(w * 64 + static_cast<std::size_t>(std::countr_zero(common)));
                    bump(u, v);
                    bump(u, x);
                    bump(v, x);
                }
            row(u)[static_cast<std::size_t>(v) / 64] |= Word{1} << (v % 64);
            row(v)[static_cast<std::size_t>(u) / 64] |= Word{1} << (u % 64);
            if (uncovered == 0) {
                trace.tau = static_cast<std::int64_t>(i) + 1;
                break;
            }
        }
        return trace;
    }
}
