#pragma once

#include <cstdint>
#include <limits>

namespace ftd
{
    /**
     * Counter-based generator built on the SplitMix64 finalizer.
     *
     * Output number i of stream `seed` is mix(seed + (i + 1) * 0x9e3779b97f4a7c15), so any
     * element can be computed directly with `at(seed, i)` and streams never need coordination.
     * Independent trials use `trial_seed(base, index) = base ^ index`.
     */
    class CounterRng
    {
    public:
        using result_type = std::uint64_t;

        static constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

        explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : _seed(seed), _counter(counter) {}

        static constexpr std::uint64_t mix(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t index)
        {
            return mix(seed + (index + 1) * golden_gamma);
        }

        /// Maps a 64-bit word to [0, 1) using its top 53 bits.
        static constexpr double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        result_type operator()() { return at(_seed, _counter++); }

        double uniform01() { return to_unit((*this)()); }

        /// Unbiased integer in [0, bound) by Lemire's multiply-and-reject method.
        std::uint64_t below(std::uint64_t bound)
        {
            __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
            auto low = static_cast<std::uint64_t>(m);
            if (low < bound) {
                std::uint64_t threshold = (0 - bound) % bound;
                while (low < threshold) {
                    m = static_cast<__uint128_t>((*this)()) * bound;
                    low = static_cast<std::uint64_t>(m);
                }
            }
            return static_cast<std::uint64_t>(m >> 64);
        }

        std::uint64_t counter() const { return _counter; }

    private:
        std::uint64_t _seed;
        std::uint64_t _counter;
    };

    constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) { return base_seed ^ trial_index; }
}
