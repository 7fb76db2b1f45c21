#pragma once

#include "nethier/error.hpp"
#include "nethier/metric.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace nethier::corpus {

/// Synthetic families. Every generator is sequential in one seeded engine,
/// so the first m points do not depend on how many are requested (nested).
enum class Family { line, grid2d, gaussian_mixture };

inline Family parse_family(std::string_view s) {
    if (s == "line") return Family::line;
    if (s == "grid2d" || s == "grid") return Family::grid2d;
    if (s == "gaussian-mixture" || s == "gaussian_mixture" || s == "gmm") return Family::gaussian_mixture;
    throw usage_error("unknown corpus family '" + std::string(s) + "'");
}

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::line: return "line";
    case Family::grid2d: return "grid2d";
    case Family::gaussian_mixture: return "gaussian-mixture";
    }
    return "?";
}

inline std::size_t dimension(Family f) { return f == Family::line ? 1 : 2; }

/// Line: prefix sums of gaps drawn from U[1,3).
inline std::vector<double> line_coords(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gap(1.0, 3.0);
    std::vector<double> xs(m);
    double x = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        xs[k] = x;
        x += gap(rng);
    }
    return xs;
}

/// Integer lattice in square shells around the origin, each point jittered by
/// at most 0.2 per axis.
inline std::vector<double> grid2d_coords(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    std::vector<double> xy;
    xy.reserve(2 * m);
    auto emit = [&](long x, long y) {
        if (xy.size() >= 2 * m) return;
        const double jx = jitter(rng), jy = jitter(rng);
        xy.push_back(double(x) + jx);
        xy.push_back(double(y) + jy);
    };
    for (long s = 0; xy.size() < 2 * m; ++s) {
        if (s == 0) {
            emit(0, 0);
            continue;
        }
        for (long x = -s; x <= s; ++x) emit(x, -s);
        for (long y = -s + 1; y <= s - 1; ++y) {
            emit(-s, y);
            emit(s, y);
        }
        for (long x = -s; x <= s; ++x) emit(x, s);
    }
    return xy;
}

/// Points drawn round-robin from `clusters` isotropic Gaussians whose centres
/// lie in a box of side 100; component spread 3.
inline std::vector<double> gaussian_mixture_coords(std::size_t m, std::uint64_t seed, std::size_t clusters = 5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(0.0, 100.0);
    std::vector<double> centres(2 * clusters);
    for (auto& c : centres) c = box(rng);
    std::normal_distribution<double> noise(0.0, 3.0);
    std::vector<double> xy;
    xy.reserve(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t c = k % clusters;
        const double x = centres[2 * c] + noise(rng);
        const double y = centres[2 * c + 1] + noise(rng);
        xy.push_back(x);
        xy.push_back(y);
    }
    return xy;
}

inline std::vector<double> coords(Family f, std::size_t m, std::uint64_t seed) {
    switch (f) {
    case Family::line: return line_coords(m, seed);
    case Family::grid2d: return grid2d_coords(m, seed);
    case Family::gaussian_mixture: return gaussian_mixture_coords(m, seed);
    }
    return {};
}

inline PointSet generate(Family f, std::size_t m, std::uint64_t seed) {
    return PointSet::from_coords(dimension(f), coords(f, m, seed), Norm::L2);
}

} // namespace nethier::corpus
