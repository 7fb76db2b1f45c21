#pragma once

#include "nethier/metric.hpp"
#include "nethier/net_hierarchy.hpp"
#include "nethier/tree_queries.hpp"

#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace nethier {

/// Immutable preprocessing result: metric, nets, compacted tree, c-lists and
/// navigation tables. Cheap to copy (shared state), safe for concurrent reads.
class Index {
public:
    Index() = default;

    static Index build(PointSet ps, int c = default_list_constant) {
        const MetricStats st = stats_of(ps);
        Hierarchy h = build_hierarchy(ps, c, st.i_top);
        return assemble(std::move(ps), std::move(h), st);
    }

    /// Wraps already-built parts (persistence path). Navigation is rebuilt.
    static Index assemble(PointSet ps, Hierarchy h, const MetricStats& stats) {
        auto st = std::make_shared<State>();
        st->points = std::move(ps);
        st->hierarchy = std::move(h);
        st->stats = stats;
        st->queries = TreeQueries(st->hierarchy.tree);
        Index idx;
        idx.m_state = std::move(st);
        return idx;
    }

    bool empty() const noexcept { return !m_state; }
    const PointSet& points() const { return m_state->points; }
    const MetricStats& stats() const { return m_state->stats; }
    const Hierarchy& hierarchy() const { return m_state->hierarchy; }
    const NetLevels& nets() const { return m_state->hierarchy.nets; }
    const HierarchyTree& tree() const { return m_state->hierarchy.tree; }
    const CListStore& lists() const { return m_state->hierarchy.lists; }
    const TreeQueries& queries() const { return m_state->queries; }

    std::size_t size() const { return points().size(); }
    Level i_top() const { return nets().i_top; }
    int c() const { return lists().c(); }

    double distance(PointId a, PointId b) const { return points().distance(a, b); }

    std::vector<PointId> c_list(PointId y, Level i, double c_query) const {
        return nethier::c_list(points(), hierarchy(), y, i, c_query);
    }
    std::vector<PointId> scan_down(std::vector<PointId> seeds, Level from, Level to,
                                   double c_scan = scan_constant) const {
        return nethier::scan_down(points(), hierarchy(), std::move(seeds), from, to, c_scan);
    }
    std::vector<PointId> descendants_search(PointId y, Level i, double eps) const {
        return nethier::descendants_search(points(), hierarchy(), y, i, eps);
    }
    bool is_c_list_descendant(PointId y, Level i, PointId x, Level j, double c_query) const {
        return nethier::is_c_list_descendant(points(), hierarchy(), y, i, x, j, c_query);
    }

    NodeId lca(NodeId u, NodeId v) const { return queries().lca(u, v); }
    std::pair<PointId, NodeId> level_ancestor(PointId q, Level i) const { return queries().level_ancestor(q, i); }
    std::uint32_t dfs_rank(PointId q) const { return queries().dfs_rank(q); }

private:
    struct State {
        PointSet points;
        MetricStats stats;
        Hierarchy hierarchy;
        TreeQueries queries;
    };

public:
    static MetricStats stats_of(const PointSet& ps) {
        if (ps.size() >= 2) return compute_stats(ps);
        MetricStats s;
        s.diameter = 0.0;
        s.aspect_ratio = 1.0;
        s.i_top = 0;
        s.min_dist = 0.0;
        return s;
    }

private:
    std::shared_ptr<const State> m_state;
};

} // namespace nethier
