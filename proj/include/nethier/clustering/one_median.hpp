#pragma once

#include "nethier/clustering/common.hpp"
#include "nethier/projected_tree.hpp"

namespace nethier {

namespace detail {

/// argmin over cand of cost(x); ties to the smaller id (cand is sorted).
template <class Cost>
std::pair<PointId, double> argmin_point(std::span<const PointId> cand, Cost&& cost) {
    PointId best = no_point;
    double best_cost = std::numeric_limits<double>::infinity();
    for (PointId x : cand) {
        const double v = cost(x);
        if (v < best_cost) best = x, best_cost = v;
    }
    return {best, best_cost};
}

inline double weighted_cost(const PointSet& ps, std::span<const Representative> reps, PointId x) {
    double s = 0.0;
    for (const auto& r : reps) s += double(r.wt) * ps(r.point, x);
    return s;
}

} // namespace detail

/// Top-down 1-median over Q: descends c=7 lists while the best candidate
/// stays cheap, then refines around the stopping point.
inline ClusteringResult one_median_simple(const Index& idx, std::span<const PointId> query, double eps) {
    validate_eps(eps);
    const auto q = normalize_query(idx, query);
    const auto& ps = idx.points();
    const double n = double(q.size());
    auto median = [&](PointId z) {
        double s = 0.0;
        for (PointId x : q) s += ps(x, z);
        return s;
    };

    Trace tr;
    tr.root_level = idx.i_top();
    PointId y = idx.tree().node(idx.tree().root()).point;
    Level i_star = 0;
    bool stopped = false;
    for (Level i = idx.i_top(); i >= -3; --i) {
        const auto lst = idx.c_list(y, i, 7.0);
        const auto [y_hat, cost] = detail::argmin_point(lst, median);
        tr.rep_history.push_back(lst.size());
        if (cost > 3.0 * n * pow2(i - 1)) {
            i_star = i;
            stopped = true;
            break;
        }
        y = y_hat;
    }
    tr.final_level = i_star;
    tr.halted = stopped;
    if (!stopped) {
        // the test never fired down to 2^-4: y is already optimal
        tr.candidates = 1;
        return detail::finish(idx, q, {y}, false, std::move(tr));
    }
    const Level depth = log2_inverse_ceil(eps / 2.0);
    auto cand = idx.scan_down(idx.c_list(y, i_star, 7.0), i_star - 1, i_star - 1 - depth);
    tr.candidates = cand.size();
    const PointId best = detail::argmin_point(cand, median).first;
    return detail::finish(idx, q, {best}, false, std::move(tr));
}

/// 1-median driven by the projected tree T|Q: keeps a weighted frontier of
/// uncompacted T|Q nodes, retires nodes far from the current center into
/// `summ`, and stops once the estimated cost exceeds alpha n 2^{i-1}.
inline ClusteringResult one_median_fast(const Index& idx, std::span<const PointId> query, const AlgoParams& prm) {
    prm.validate();
    if (prm.c_list > idx.c()) throw usage_error("c_list exceeds the index's stored list constant");
    const auto q = normalize_query(idx, query);
    const auto& ps = idx.points();
    const std::size_t n = q.size();

    const auto pt = build_projection(idx, q);
    Trace tr;
    tr.root_level = pt.root_level();
    if (n == 1) {
        tr.candidates = 1;
        return detail::finish(idx, q, {q.front()}, false, std::move(tr));
    }

    std::vector<UncompactedNode> frontier{projection_root(pt)}, next;
    PointId y = frontier.front().point;
    double summ = 0.0;
    std::size_t far_weight = 0;
    Level i_star = 0;
    PointId y_star = y;
    std::vector<Representative> reps;
    for (Level i = tr.root_level - 1; i >= 0; --i) {
        next.clear();
        const double reach = prm.c_prime * pow2(i);
        for (const auto& r : frontier) {
            const double d = ps(r.point, y);
            if (d > reach) {
                summ += double(r.wt) * d;
                far_weight += r.wt;
            } else {
                const auto kids = children_uncompacted(idx, pt, r);
                next.insert(next.end(), kids.begin(), kids.end());
            }
        }
        frontier.swap(next);
        reps.clear();
        std::size_t live = 0;
        for (const auto& r : frontier) {
            reps.push_back({r.point, r.level, r.wt});
            live += r.wt;
        }
        tr.rep_history.push_back(frontier.size());
        tr.far_history.push_back(far_weight);
        if (live + far_weight != n) tr.weight_conserved = false;

        const auto lst = idx.c_list(y, i, double(prm.c_list));
        const auto [y_hat, cost] =
            detail::argmin_point(lst, [&](PointId x) { return detail::weighted_cost(ps, reps, x); });
        i_star = i;
        y_star = y;
        if (summ + cost > prm.alpha * double(n) * pow2(i - 1)) {
            tr.halted = true;
            break;
        }
        y = y_hat;
    }
    // finishing level 0 without a stop counts as i* = 0
    tr.final_level = i_star;
    tr.halt_summ = summ;
    tr.halt_near_cost = detail::weighted_cost(ps, reps, y_star);

    const double far_radius = 3.0 * prm.c_analysis / (2.0 * prm.eps_prime()) * pow2(i_star);
    std::vector<PointId> near;
    for (PointId x : q)
        if (ps(x, y_star) <= far_radius) near.push_back(x);
        else ++tr.far_points;
    const Level depth = log2_inverse_ceil(prm.eps_double_prime());
    const auto rs = representatives_at(pt, near, i_star - depth);
    tr.representatives = rs.reps.size();

    const auto cand =
        idx.scan_down(idx.c_list(y_star, i_star, double(prm.c_list)), i_star - 1, i_star - depth);
    tr.candidates = cand.size();
    const PointId best =
        detail::argmin_point(cand, [&](PointId x) { return detail::weighted_cost(ps, rs.reps, x); }).first;
    return detail::finish(idx, q, {best}, false, std::move(tr));
}

} // namespace nethier
