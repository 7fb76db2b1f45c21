#pragma once

#include "nethier/clustering/common.hpp"
#include "nethier/projected_tree.hpp"

namespace nethier {

struct GonzalezResult {
    std::vector<PointId> centers; // in pick order
    double radius = 0.0;          // max distance from Q to the centers
};

/// Farthest-point traversal seeded at the smallest id of Q; ties to the
/// smaller id. Returns Q itself when p >= |Q|.
inline GonzalezResult gonzalez(const PointSet& ps, std::span<const PointId> q, std::size_t p) {
    if (q.empty()) throw usage_error("empty query set");
    if (p == 0) throw usage_error("p must be positive");
    std::vector<PointId> pts(q.begin(), q.end());
    std::sort(pts.begin(), pts.end());
    GonzalezResult g;
    if (p >= pts.size()) {
        g.centers = pts;
        return g;
    }
    std::vector<double> dist(pts.size(), std::numeric_limits<double>::infinity());
    std::size_t pick = 0;
    for (std::size_t k = 0; k < p; ++k) {
        g.centers.push_back(pts[pick]);
        std::size_t far = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            dist[j] = std::min(dist[j], ps(pts[j], pts[pick]));
            if (dist[j] > dist[far]) far = j;
        }
        pick = far;
    }
    g.radius = dist[pick];
    return g;
}

/// p-center (1-center when p = 1) over Q. Seeds with gonzalez, collects
/// candidate centers by scanning c=6 lists below each seed's level-i
/// ancestor, and solves exhaustively against the level-(i-L') representatives.
inline ClusteringResult p_center(const Index& idx, std::span<const PointId> query, std::size_t p, double eps) {
    validate_eps(eps);
    if (p == 0) throw usage_error("p must be positive");
    const auto q = normalize_query(idx, query);
    const auto& ps = idx.points();

    Trace tr;
    const auto seed = gonzalez(ps, q, p);
    tr.seed_size = seed.centers.size();
    tr.alg0 = seed.radius;
    if (seed.radius == 0.0) return detail::finish(idx, q, seed.centers, true, std::move(tr));

    const Level i = std::min(detail::ceil_level(seed.radius), idx.i_top());
    AlgoParams prm;
    prm.eps = eps;
    const Level depth = log2_inverse_ceil(prm.eps_center());
    tr.final_level = i;

    const auto pt = build_projection(idx, q);
    const Level t = i - depth;
    const auto rs = representatives_at(pt, q, t);
    tr.representatives = rs.reps.size();
    std::vector<WeightedPoint> reps;
    for (const auto& r : rs.reps) reps.push_back({r.point, r.wt});

    // upper bound on the optimum over the representatives
    const double bound = seed.radius + pow2(t + 1);
    // level-l seeds farther than bound + 2^{l+1} from every representative are dropped
    auto useful = [&](PointId y, Level l) {
        const double lim = bound + pow2(l + 1);
        for (const auto& r : reps)
            if (ps(y, r.point) <= lim) return true;
        return false;
    };
    auto filter = [&](std::vector<PointId>& v, Level l) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        std::erase_if(v, [&](PointId y) { return !useful(y, l); });
    };

    std::vector<PointId> cand, next;
    for (PointId b : seed.centers) {
        const PointId anc = idx.level_ancestor(b, i).first;
        const auto lst = idx.c_list(anc, i, 6.0);
        cand.insert(cand.end(), lst.begin(), lst.end());
    }
    filter(cand, i - 1);
    for (Level l = i - 1; l > t; --l) {
        if (l <= 0 && scan_constant * pow2(l) < 1.0) break;
        next.clear();
        for (PointId y : cand) {
            const auto lst = idx.c_list(y, l, scan_constant);
            next.insert(next.end(), lst.begin(), lst.end());
        }
        filter(next, l - 1);
        cand.swap(next);
    }
    if (cand.size() < p) {
        std::vector<PointId> all(q.begin(), q.end());
        cand.insert(cand.end(), all.begin(), all.end());
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    }
    const auto& pruned = cand;
    tr.candidates = pruned.size();
    auto best = best_subset<true>(ps, reps, pruned, p);
    return detail::finish(idx, q, std::move(best), true, std::move(tr));
}

inline ClusteringResult one_center(const Index& idx, std::span<const PointId> query, double eps) {
    return p_center(idx, query, 1, eps);
}

} // namespace nethier
