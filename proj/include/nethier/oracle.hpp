#pragma once

// Brute-force references. Deliberately self-contained: only the metric layer
// is shared with the indexed code paths.

#include "nethier/error.hpp"
#include "nethier/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace nethier::oracle {

inline constexpr double subset_limit = 1e7;

/// Uncompacted hierarchy: one node per (point, level) with p in Y_level.
struct NaiveNode {
    PointId point;
    Level level;
    PointId parent_point; // no_point at the root
};

struct NaiveList {
    PointId point;
    Level level;
    std::vector<PointId> members;
};

/// A contracted run as the compaction rule defines it.
struct NaiveRun {
    PointId point;
    Level hi;
    Level lo;
    PointId parent_point; // point of the parent run, no_point at the root
    Level parent_lo;      // lo of the parent run
    auto operator<=>(const NaiveRun&) const = default;
};

struct NaiveTree {
    Level i_top = 0;
    std::vector<std::vector<PointId>> nets; // Y_0..Y_{i_top}
    std::vector<NaiveNode> nodes;           // sorted by (level desc, point)
    std::vector<NaiveList> lists;           // every (y,i), i >= 1, trivial ones included

    bool in_net(PointId p, Level i) const {
        if (i <= 0) return true;
        const auto& y = nets[std::size_t(i)];
        return std::binary_search(y.begin(), y.end(), p);
    }

    /// Parent point of the copy (p, i), or no_point at the root.
    PointId parent_of(PointId p, Level i) const {
        for (const auto& n : nodes)
            if (n.point == p && n.level == i) return n.parent_point;
        throw data_error("no such copy");
    }

    const std::vector<PointId>& list(PointId y, Level i) const {
        for (const auto& l : lists)
            if (l.point == y && l.level == i) return l.members;
        throw data_error("no such list");
    }

    /// Children (point) of the copy (p, i) at level i-1.
    std::vector<PointId> children_of(PointId p, Level i) const {
        std::vector<PointId> out;
        for (const auto& n : nodes)
            if (n.level == i - 1 && n.parent_point == p) out.push_back(n.point);
        return out;
    }
};

inline Level naive_top_level(const PointSet& ps) {
    double diam = 0.0;
    for (PointId a = 0; a < ps.size(); ++a)
        for (PointId b = 0; b < ps.size(); ++b) diam = std::max(diam, ps(a, b));
    Level i = 0;
    while (std::ldexp(1.0, i) <= diam) ++i;
    return i;
}

/// Definition-chasing build: greedy nets per level in id order, T-parents by
/// same-point priority then minimum id, all c-lists by full scans.
inline NaiveTree naive_build(const PointSet& ps, int c) {
    const std::size_t m = ps.size();
    NaiveTree t;
    t.i_top = m >= 2 ? naive_top_level(ps) : 0;
    t.nets.resize(std::size_t(t.i_top) + 1);
    for (PointId p = 0; p < m; ++p) t.nets[0].push_back(p);
    for (Level i = 1; i <= t.i_top; ++i) {
        const double r = std::ldexp(1.0, i);
        auto& net = t.nets[std::size_t(i)];
        for (PointId x : t.nets[std::size_t(i) - 1]) {
            bool far = true;
            for (PointId y : net)
                if (ps(x, y) < r) {
                    far = false;
                    break;
                }
            if (far) net.push_back(x);
        }
    }
    for (Level i = t.i_top; i >= 0; --i) {
        for (PointId p : t.nets[std::size_t(i)]) {
            PointId par = no_point;
            if (i < t.i_top) {
                if (t.in_net(p, i + 1)) {
                    par = p;
                } else {
                    const double r = std::ldexp(1.0, i + 1);
                    for (PointId z : t.nets[std::size_t(i) + 1])
                        if (ps(p, z) <= r) {
                            par = z;
                            break;
                        }
                }
            }
            t.nodes.push_back({p, i, par});
        }
    }
    for (Level i = 1; i <= t.i_top; ++i) {
        const double r = c * std::ldexp(1.0, i);
        for (PointId y : t.nets[std::size_t(i)]) {
            NaiveList l{y, i, {}};
            for (PointId z : t.nets[std::size_t(i) - 1])
                if (ps(y, z) <= r) l.members.push_back(z);
            t.lists.push_back(std::move(l));
        }
    }
    return t;
}

/// Contracts each copy (p,i), i >= 1, into the copy below it when it has a
/// single child and a trivial c-list. Returns runs sorted by value.
inline std::vector<NaiveRun> naive_compact(const NaiveTree& t) {
    // Walk each point's copies top-down, cutting after every kept copy.
    std::map<std::pair<PointId, Level>, std::pair<Level, Level>> run_of; // (p,i) -> (hi,lo)
    std::vector<PointId> pts = t.nets[0];
    for (PointId p : pts) {
        Level top = 0;
        while (top + 1 <= t.i_top && t.in_net(p, top + 1)) ++top;
        Level hi = top;
        for (Level i = top; i >= 0; --i) {
            bool contract = false;
            if (i >= 1) {
                const auto kids = t.children_of(p, i);
                contract = kids.size() == 1 && t.list(p, i).size() == 1;
            }
            if (!contract) {
                for (Level k = hi; k >= i; --k) run_of[{p, k}] = {hi, i};
                hi = i - 1;
            }
        }
    }
    std::vector<NaiveRun> runs;
    for (const auto& [key, range] : run_of) {
        const auto [p, i] = key;
        if (i != range.first) continue;
        NaiveRun r{p, range.first, range.second, no_point, 0};
        const PointId par = t.parent_of(p, i);
        if (par != no_point) {
            r.parent_point = par;
            r.parent_lo = run_of.at({par, i + 1}).second;
        }
        runs.push_back(r);
    }
    std::sort(runs.begin(), runs.end());
    return runs;
}

/// Compacted projection node: the branching copy (point, level) with parent
/// copy and leaf count.
struct NaiveProjNode {
    PointId point;
    Level level;
    PointId parent_point;
    Level parent_level;
    std::size_t wt;
    auto operator<=>(const NaiveProjNode&) const = default;
};

/// Subtree of the uncompacted tree induced by Q's leaves, keeping leaves and
/// copies with at least two children in the induced subtree.
inline std::vector<NaiveProjNode> naive_projection(const NaiveTree& t, std::span<const PointId> q) {
    std::map<std::pair<PointId, Level>, PointId> parent;
    for (const auto& n : t.nodes) parent[{n.point, n.level}] = n.parent_point;
    std::map<std::pair<PointId, Level>, std::size_t> wt;
    std::map<std::pair<PointId, Level>, std::vector<std::pair<PointId, Level>>> kids;
    for (PointId leaf : q) {
        std::pair<PointId, Level> cur{leaf, 0};
        while (true) {
            const bool fresh = wt.find(cur) == wt.end();
            ++wt[cur];
            const PointId par = parent.at(cur);
            if (par == no_point) break;
            const std::pair<PointId, Level> up{par, cur.second + 1};
            if (fresh) kids[up].push_back(cur);
            cur = up;
        }
    }
    auto kept = [&](const std::pair<PointId, Level>& v) { return v.second == 0 || kids[v].size() >= 2; };
    // Root of the projection: highest kept copy.
    std::vector<NaiveProjNode> out;
    std::pair<PointId, Level> root{no_point, 0};
    for (const auto& [v, w] : wt)
        if (kept(v) && w == q.size() && (root.first == no_point || v.second > root.second)) root = v;
    for (const auto& [v, w] : wt) {
        if (!kept(v) || v.second > root.second) continue;
        NaiveProjNode n{v.first, v.second, no_point, 0, w};
        if (v != root) {
            std::pair<PointId, Level> cur = v;
            do {
                cur = {parent.at(cur), cur.second + 1};
            } while (!kept(cur));
            n.parent_point = cur.first;
            n.parent_level = cur.second;
        }
        out.push_back(n);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

/// Calls f(subset) for every k-subset of [0, n) in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct Solution {
    std::vector<PointId> centers;
    double objective = 0.0;
};

namespace detail {

template <bool Max>
Solution exact(const PointSet& ps, std::span<const PointId> q, std::size_t p) {
    if (q.empty()) throw usage_error("empty query set");
    if (p == 0) throw usage_error("p must be positive");
    const std::size_t m = ps.size();
    if (p >= m) {
        Solution s;
        for (PointId c = 0; c < m; ++c) s.centers.push_back(c);
        return s;
    }
    const double combos = binomial(m, p);
    if (combos > subset_limit) throw blowup_error("exhaustive oracle exceeds its subset budget", combos, subset_limit);
    std::vector<double> dist(q.size() * m);
    for (std::size_t j = 0; j < q.size(); ++j)
        for (PointId c = 0; c < m; ++c) dist[j * m + c] = ps.distance(q[j], c);
    Solution best;
    best.objective = std::numeric_limits<double>::infinity();
    for_each_subset(m, p, [&](std::span<const std::size_t> s) {
        double total = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j) {
            double near = std::numeric_limits<double>::infinity();
            for (std::size_t c : s) near = std::min(near, dist[j * m + c]);
            if constexpr (Max) {
                total = std::max(total, near);
            } else {
                total += near;
            }
            if (total >= best.objective) return;
        }
        best.objective = total;
        best.centers.assign(s.begin(), s.end());
    });
    return best;
}

} // namespace detail

/// Best single center over all of M, ties to the smallest id.
inline Solution exact_one_median(const PointSet& ps, std::span<const PointId> q) {
    return detail::exact<false>(ps, q, 1);
}
inline Solution exact_p_median(const PointSet& ps, std::span<const PointId> q, std::size_t p) {
    return detail::exact<false>(ps, q, p);
}
inline Solution exact_one_center(const PointSet& ps, std::span<const PointId> q) {
    return detail::exact<true>(ps, q, 1);
}
inline Solution exact_p_center(const PointSet& ps, std::span<const PointId> q, std::size_t p) {
    return detail::exact<true>(ps, q, p);
}

} // namespace nethier::oracle
