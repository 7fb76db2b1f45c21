#pragma once

#include "nethier/index.hpp"
#include "nethier/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace nethier::check {

/// Empty string when equal, otherwise a description of the first difference.
inline std::string diff_nets(const Index& idx, const oracle::NaiveTree& t) {
    if (idx.i_top() != t.i_top)
        return "i_top " + std::to_string(idx.i_top()) + " vs " + std::to_string(t.i_top);
    for (Level i = 0; i <= t.i_top; ++i) {
        const auto fast = idx.nets().net(i);
        if (!std::equal(fast.begin(), fast.end(), t.nets[std::size_t(i)].begin(), t.nets[std::size_t(i)].end()))
            return "net Y_" + std::to_string(i) + " differs";
    }
    return {};
}

/// (point, level, parent point) for every copy in the expanded tree.
inline std::set<std::tuple<PointId, Level, PointId>> expand_tree(const HierarchyTree& tree) {
    std::set<std::tuple<PointId, Level, PointId>> out;
    for (NodeId v = 0; v < tree.size(); ++v) {
        const auto& n = tree.node(v);
        for (Level k = n.lo; k <= n.hi; ++k) {
            PointId par = no_point;
            if (k < n.hi) par = n.point;
            else if (n.parent != no_node) par = tree.node(n.parent).point;
            out.insert({n.point, k, par});
        }
    }
    return out;
}

inline std::string diff_tree(const Index& idx, const oracle::NaiveTree& t) {
    const auto fast = expand_tree(idx.tree());
    std::set<std::tuple<PointId, Level, PointId>> naive;
    for (const auto& n : t.nodes) naive.insert({n.point, n.level, n.parent_point});
    if (fast != naive) return "uncompacted tree differs";
    for (NodeId v = 1; v < idx.tree().size(); ++v) {
        const auto& n = idx.tree().node(v);
        if (idx.tree().node(n.parent).lo != n.hi + 1) return "child run does not hang below its parent's run";
    }
    std::vector<oracle::NaiveRun> runs;
    for (NodeId v = 0; v < idx.tree().size(); ++v) {
        const auto& n = idx.tree().node(v);
        oracle::NaiveRun r{n.point, n.hi, n.lo, no_point, 0};
        if (n.parent != no_node) {
            r.parent_point = idx.tree().node(n.parent).point;
            r.parent_lo = idx.tree().node(n.parent).lo;
        }
        runs.push_back(r);
    }
    std::sort(runs.begin(), runs.end());
    if (runs != oracle::naive_compact(t)) return "compacted runs differ";
    return {};
}

inline std::string diff_lists(const Index& idx, const oracle::NaiveTree& t) {
    for (const auto& l : t.lists) {
        const auto fast = idx.c_list(l.point, l.level, idx.c());
        if (fast != l.members) {
            std::ostringstream os;
            os << "list (" << l.point << "," << l.level << ") differs";
            return os.str();
        }
        const bool stored = !idx.lists().find(l.point, l.level).empty();
        if (stored != (l.members.size() > 1)) return "stored/trivial classification differs";
    }
    return {};
}

inline std::string diff_structure(const Index& idx, const oracle::NaiveTree& t) {
    if (auto d = diff_nets(idx, t); !d.empty()) return d;
    if (auto d = diff_tree(idx, t); !d.empty()) return d;
    return diff_lists(idx, t);
}

/// Zero when every net satisfies packing (>= 2^i) and strict covering (< 2^i).
inline std::size_t net_axiom_violations(const Index& idx) {
    const auto& ps = idx.points();
    std::size_t bad = 0;
    for (Level i = 1; i <= idx.i_top(); ++i) {
        const auto net = idx.nets().net(i);
        const auto below = idx.nets().net(i - 1);
        const double r = pow2(i);
        for (std::size_t a = 0; a < net.size(); ++a)
            for (std::size_t b = a + 1; b < net.size(); ++b)
                if (ps(net[a], net[b]) < r) ++bad;
        for (PointId x : below) {
            bool covered = false;
            for (PointId y : net)
                if (ps(x, y) < r) {
                    covered = true;
                    break;
                }
            if (!covered) ++bad;
        }
        if (!std::includes(below.begin(), below.end(), net.begin(), net.end())) ++bad;
    }
    if (idx.nets().net(idx.i_top()).size() != 1) ++bad;
    return bad;
}

} // namespace nethier::check

#include "nethier/projected_tree.hpp"

namespace nethier::check {

inline NodeId naive_lca(const HierarchyTree& t, NodeId u, NodeId v) {
    auto depth = [&](NodeId x) {
        std::size_t d = 0;
        while (t.node(x).parent != no_node) x = t.node(x).parent, ++d;
        return d;
    };
    std::size_t du = depth(u), dv = depth(v);
    while (du > dv) u = t.node(u).parent, --du;
    while (dv > du) v = t.node(v).parent, --dv;
    while (u != v) u = t.node(u).parent, v = t.node(v).parent;
    return u;
}

inline std::pair<PointId, NodeId> naive_level_ancestor(const HierarchyTree& t, PointId q, Level i) {
    NodeId v = t.leaf(q);
    while (t.node(v).hi < i) v = t.node(v).parent;
    return {t.node(v).point, v};
}

inline std::vector<oracle::NaiveProjNode> projection_nodes(const ProjectedTree& pt) {
    std::vector<oracle::NaiveProjNode> out;
    for (const auto& n : pt.nodes()) {
        oracle::NaiveProjNode x{n.point, n.level, no_point, 0, n.wt};
        if (n.parent != ProjectedTree::none) {
            x.parent_point = pt.node(n.parent).point;
            x.parent_level = pt.node(n.parent).level;
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace nethier::check
