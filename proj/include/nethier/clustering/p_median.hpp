#pragma once

#include "nethier/clustering/center.hpp"
#include "nethier/clustering/common.hpp"

#include <map>

namespace nethier {

/// Union over j = 0..levels of descendants searches with refinement eps
/// from r's ancestor at level ceil(log2 R) + j, levels clipped to [0, i_top].
inline std::vector<PointId> exponential_grid(const Index& idx, PointId r, double radius, double eps, int levels) {
    validate_eps(eps);
    if (r >= idx.size()) throw data_error("point id out of range");
    if (!(radius > 0.0)) throw usage_error("grid radius must be positive");
    const Level base = detail::ceil_level(radius);
    std::vector<PointId> out;
    Level last = -1;
    for (int j = 0; j <= levels; ++j) {
        const Level l = std::clamp(base + j, 0, idx.i_top());
        if (l == last) continue;
        last = l;
        const PointId anc = idx.level_ancestor(r, l).first;
        const auto part = idx.descendants_search(anc, l, eps);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// p-median over Q: a gonzalez bicriteria seed A, a weighted coreset S from
/// the exponential grids around A, a centroid set D from grids around S, and
/// an exhaustive weighted search over p-subsets of D.
inline ClusteringResult p_median(const Index& idx, std::span<const PointId> query, std::size_t p, double eps) {
    validate_eps(eps);
    if (p == 0) throw usage_error("p must be positive");
    const auto q = normalize_query(idx, query);
    const auto& ps = idx.points();
    const std::size_t n = q.size();

    Trace tr;
    if (p >= n) return detail::finish(idx, q, q, false, std::move(tr));

    const int log_n = detail::ceil_level(double(n));
    const auto seed = gonzalez(ps, q, std::min(n, 4 * p * std::size_t(std::max(1, log_n))));
    const auto& a = seed.centers;
    tr.seed_size = a.size();

    std::vector<double> reach(a.size(), 0.0);
    double seed_cost = 0.0;
    for (PointId x : q) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < a.size(); ++k)
            if (ps(x, a[k]) < ps(x, a[best])) best = k;
        const double d = ps(x, a[best]);
        reach[best] = std::max(reach[best], d);
        seed_cost += d;
    }
    tr.alg0 = seed_cost;

    const double grid_eps = eps / 4.0;
    const int levels = log_n + 2;
    std::vector<PointId> grid;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto g = exponential_grid(idx, a[k], std::max(1.0, reach[k]), grid_eps, levels);
        grid.insert(grid.end(), g.begin(), g.end());
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::map<PointId, std::uint64_t> snapped;
    for (PointId x : q) {
        PointId best = grid.front();
        for (PointId g : grid)
            if (ps(x, g) < ps(x, best)) best = g;
        ++snapped[best];
    }
    std::vector<WeightedPoint> coreset;
    for (const auto& [pnt, w] : snapped) coreset.push_back({pnt, w});
    tr.coreset_size = coreset.size();

    const double scale = std::max(1.0, seed_cost / double(n));
    std::vector<PointId> cand;
    for (const auto& s : coreset) {
        const auto g = exponential_grid(idx, s.point, scale, grid_eps, levels);
        cand.insert(cand.end(), g.begin(), g.end());
        cand.push_back(s.point);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    tr.candidates = cand.size();

    auto best = best_subset<false>(ps, coreset, cand, p);
    return detail::finish(idx, q, std::move(best), false, std::move(tr));
}

} // namespace nethier
