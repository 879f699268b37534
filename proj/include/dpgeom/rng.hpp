#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace dpgeom {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of the substream addressed by `path` below `seed`.
/// Streams for distinct paths are independent for all practical purposes,
/// so work split by (seed, index) gives the same numbers however it is
/// scheduled.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(seed);
    for (auto p : path) s = splitmix64(s ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

inline Engine make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
    return Engine(derive_seed(seed, path));
}

inline Eigen::VectorXd standard_normal(Engine& eng, Eigen::Index dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd g(dim);
    for (Eigen::Index i = 0; i < dim; ++i) g[i] = normal(eng);
    return g;
}

}  // namespace dpgeom
