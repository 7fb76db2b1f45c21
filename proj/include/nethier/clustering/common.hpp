#pragma once

#include "nethier/error.hpp"
#include "nethier/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace nethier {

struct WeightedPoint {
    PointId point;
    std::uint64_t weight;
};

/// Constants of the query algorithms. `c_list` is the c-list radius used by
/// the efficient 1-median loop and must not exceed the index's stored c;
/// `c_analysis` sets the far-point threshold of its refinement.
struct AlgoParams {
    double eps = 0.5;
    int c_list = default_list_constant;
    double c_analysis = 60.0;
    double c_prime = 80.0;
    double alpha = 16.0;

    /// Constants that satisfy the analysis chain literally (needs an index
    /// built with c = 60).
    static AlgoParams strict(double eps) {
        AlgoParams p;
        p.eps = eps;
        p.c_list = 60;
        p.c_analysis = 60.0;
        p.c_prime = 4.0 * (4.0 + 2.0 * 60.0);
        return p;
    }

    double beta() const { return (4.0 + 2.0 * c_list) / c_prime; }
    /// Far-set refinement constant of the efficient 1-median.
    double eps_prime() const { return eps / (eps + 2.0); }
    /// Representative refinement of the efficient 1-median, capped at 1/2.
    double eps_double_prime() const { return std::min((alpha / 2.0 - 3.0) * (1.0 - beta()) * eps / 2.0, 0.5); }
    /// Center refinement: the largest power of two not above eps/24.
    double eps_center() const { return pow2(-log2_inverse_ceil(eps / 24.0)); }

    void validate() const {
        if (!(eps > 0.0 && eps <= 0.5)) throw usage_error("eps must lie in (0, 1/2]");
        if (c_list < 1) throw usage_error("c_list must be positive");
        if (!(beta() < 1.0)) throw usage_error("beta = (4 + 2c)/c' must be below 1");
        if (!(alpha > 6.0)) throw usage_error("alpha must exceed 6");
        if (c_analysis < 5.0 + 2.0 * (1.0 + beta()) * (alpha + 2.0))
            throw usage_error("c_analysis must be at least 5 + 2(1+beta)(alpha+2)");
    }
};

inline void validate_eps(double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw usage_error("eps must lie in (0, 1/2]");
}

struct Trace {
    Level root_level = 0;          // level of the projection root (1-median)
    Level final_level = 0;         // i* (1-median) or i (center / grid scale)
    bool halted = false;           // stopping test fired before the bottom level
    std::vector<std::size_t> rep_history;    // |R_i| per iteration
    std::vector<std::size_t> far_history;    // cumulative far weight per iteration
    bool weight_conserved = true;  // |R_i| weights + far weight == n every iteration
    double halt_summ = 0.0;        // summ at i*
    double halt_near_cost = 0.0;   // sum over R_{i*} of wt * d(r, y_{i*})
    std::size_t far_points = 0;    // refinement far set size
    std::size_t candidates = 0;
    std::size_t representatives = 0;
    std::size_t seed_size = 0;     // bicriteria seed / gonzalez set
    std::size_t coreset_size = 0;
    double alg0 = 0.0;
};

struct ClusteringResult {
    std::vector<PointId> centers;
    double objective = 0.0;          // normalized units
    double objective_original = 0.0; // input units
    Trace trace;
};

/// Sorted copy of a query set; rejects empty sets, unknown ids and repeats.
inline std::vector<PointId> normalize_query(const Index& idx, std::span<const PointId> q) {
    if (q.empty()) throw usage_error("empty query set");
    std::vector<PointId> out(q.begin(), q.end());
    std::sort(out.begin(), out.end());
    if (out.back() >= idx.size()) throw data_error("query point " + std::to_string(out.back()) + " is not in the index");
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw data_error("duplicate point in query set");
    return out;
}

inline double nearest(const PointSet& ps, PointId q, std::span<const PointId> c) {
    double best = std::numeric_limits<double>::infinity();
    for (PointId x : c) best = std::min(best, ps(q, x));
    return best;
}

/// Sum over q of d(q, C).
inline double evaluate_median(const PointSet& ps, std::span<const PointId> q, std::span<const PointId> c) {
    if (c.empty()) throw usage_error("empty center set");
    double s = 0.0;
    for (PointId x : q) s += nearest(ps, x, c);
    return s;
}

inline double evaluate_median(const PointSet& ps, std::span<const WeightedPoint> q, std::span<const PointId> c) {
    if (c.empty()) throw usage_error("empty center set");
    double s = 0.0;
    for (const auto& w : q) s += double(w.weight) * nearest(ps, w.point, c);
    return s;
}

/// Max over q of d(q, C).
inline double evaluate_center(const PointSet& ps, std::span<const PointId> q, std::span<const PointId> c) {
    if (c.empty()) throw usage_error("empty center set");
    double s = 0.0;
    for (PointId x : q) s = std::max(s, nearest(ps, x, c));
    return s;
}

inline double evaluate_center(const PointSet& ps, std::span<const WeightedPoint> q, std::span<const PointId> c) {
    if (c.empty()) throw usage_error("empty center set");
    double s = 0.0;
    for (const auto& w : q)
        if (w.weight > 0) s = std::max(s, nearest(ps, w.point, c));
    return s;
}

inline constexpr double subset_budget = 1e8;

inline double choose(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

/// Exhaustive search over k-subsets of `cand` (ascending ids) for the set
/// minimizing the weighted sum (or max) of distances from `pts`. Ties go to
/// the lexicographically first subset.
template <bool Max>
std::vector<PointId> best_subset(const PointSet& ps, std::span<const WeightedPoint> pts, std::span<const PointId> cand,
                                 std::size_t k) {
    if (cand.empty()) throw usage_error("empty candidate set");
    k = std::min(k, cand.size());
    const double combos = choose(cand.size(), k);
    if (combos > subset_budget)
        throw blowup_error("p-subset search over " + std::to_string(cand.size()) + " candidates needs " +
                               std::to_string(static_cast<long double>(combos)) + " combinations",
                           combos, subset_budget);
    const std::size_t n = pts.size(), d = cand.size();
    std::vector<double> dist(n * d);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t x = 0; x < d; ++x) dist[j * d + x] = ps(pts[j].point, cand[x]);

    std::vector<std::size_t> idx(k), best_idx;
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        double total = 0.0;
        bool pruned = false;
        for (std::size_t j = 0; j < n; ++j) {
            double near = std::numeric_limits<double>::infinity();
            for (std::size_t c : idx) near = std::min(near, dist[j * d + c]);
            if constexpr (Max) {
                if (pts[j].weight > 0) total = std::max(total, near);
            } else {
                total += double(pts[j].weight) * near;
            }
            if (total >= best) {
                pruned = true;
                break;
            }
        }
        if (!pruned) {
            best = total;
            best_idx = idx;
        }
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == d - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::vector<PointId> out;
    for (std::size_t c : best_idx) out.push_back(cand[c]);
    return out;
}

namespace detail {

inline ClusteringResult finish(const Index& idx, std::span<const PointId> q, std::vector<PointId> centers, bool max_obj,
                               Trace trace) {
    ClusteringResult r;
    std::sort(centers.begin(), centers.end());
    r.centers = std::move(centers);
    r.objective = max_obj ? evaluate_center(idx.points(), q, r.centers) : evaluate_median(idx.points(), q, r.centers);
    r.objective_original = r.objective / idx.points().scale();
    r.trace = std::move(trace);
    return r;
}

/// Smallest i with ALG <= 2^i, for ALG >= 1.
inline Level ceil_level(double alg) {
    Level i = 0;
    while (pow2(i) < alg) ++i;
    return i;
}

} // namespace detail

} // namespace nethier
