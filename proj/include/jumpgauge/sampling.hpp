#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "jumpgauge/metric.hpp"

namespace jumpgauge {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix64(a ^ splitmix64(b)); }

inline std::uint64_t hash_text(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline Point random_point(const MetricSpace& space, Rng& rng) {
    return std::visit(
        [&](const auto& s) -> Point {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircleSpace>) {
                return Point::circle(uniform01(rng) * s.circumference, s.circumference);
            } else if constexpr (std::is_same_v<T, IntervalSpace>) {
                return Point::interval(uniform01(rng));
            } else if constexpr (std::is_same_v<T, TriodeSpace>) {
                const auto leg = static_cast<Leg>(std::uniform_int_distribution<int>(0, 2)(rng));
                return Point::triode(leg, uniform01(rng));
            } else if constexpr (std::is_same_v<T, RealWindow>) {
                return Point::real(s.lo + (s.hi - s.lo) * uniform01(rng));
            } else {
                std::vector<Point> parts;
                for (const auto& f : s.factors) parts.push_back(random_point(f, rng));
                return Point::product(std::move(parts));
            }
        },
        space.kind);
}

inline std::vector<Tuple> random_envs(const MetricSpace& carrier, std::size_t n_vars,
                                      std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Tuple> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Tuple env;
        for (std::size_t v = 0; v < n_vars; ++v) env.push_back(random_point(carrier, rng));
        out.push_back(std::move(env));
    }
    return out;
}

}  // namespace jumpgauge
