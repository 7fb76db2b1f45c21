#pragma once

#include "nethier/error.hpp"
#include "nethier/index.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace nethier {

/// Compacted projection T|Q: Q's leaves plus every branching copy of the
/// induced subtree. Nodes are in preorder; node 0 is the root (LCA of Q).
class ProjectedTree {
public:
    struct Node {
        NodeId tnode;         // node of T holding the branching copy
        PointId point;
        Level level;          // level of the branching copy (0 for leaves)
        std::uint32_t parent; // none for the root
        std::uint32_t wt;     // leaves of Q below
    };
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    ProjectedTree() = default;

    std::size_t size() const noexcept { return m_nodes.size(); }
    std::uint32_t root() const noexcept { return 0; }
    const Node& node(std::uint32_t u) const { return m_nodes[u]; }
    std::span<const Node> nodes() const noexcept { return m_nodes; }
    std::span<const std::uint32_t> children(std::uint32_t u) const {
        return {m_children.data() + m_child_begin[u], m_child_begin[u + 1] - m_child_begin[u]};
    }
    bool is_leaf(std::uint32_t u) const { return m_child_begin[u + 1] == m_child_begin[u]; }
    Level root_level() const { return m_nodes.front().level; }
    std::size_t leaf_count() const { return m_nodes.empty() ? 0 : m_nodes.front().wt; }

    /// Projected leaf of q, or none when q is not in Q.
    std::uint32_t leaf_of(PointId q) const {
        const auto it = std::lower_bound(m_leaf_lookup.begin(), m_leaf_lookup.end(), std::pair{q, std::uint32_t(0)});
        if (it == m_leaf_lookup.end() || it->first != q) return none;
        return it->second;
    }

private:
    friend ProjectedTree build_projection(const Index& idx, std::span<const PointId> q);

    std::vector<Node> m_nodes;
    std::vector<std::uint32_t> m_child_begin;
    std::vector<std::uint32_t> m_children;
    std::vector<std::pair<PointId, std::uint32_t>> m_leaf_lookup;
};

/// Sorts Q by DFS rank, adds the LCA of each adjacent pair, and links the
/// resulting preorder sequence with a stack of the current root path.
inline ProjectedTree build_projection(const Index& idx, std::span<const PointId> q) {
    if (q.empty()) throw usage_error("empty query set");
    const auto& tq = idx.queries();
    const auto& tree = idx.tree();
    std::vector<NodeId> leaves;
    leaves.reserve(q.size());
    for (PointId p : q) {
        if (p >= idx.size()) throw data_error("query point " + std::to_string(p) + " is not in the index");
        leaves.push_back(tree.leaf(p));
    }
    // Preorder node ids coincide with the DFS leaf order.
    std::sort(leaves.begin(), leaves.end());
    if (std::adjacent_find(leaves.begin(), leaves.end()) != leaves.end())
        throw data_error("duplicate point in query set");

    std::vector<NodeId> keep = leaves;
    for (std::size_t k = 0; k + 1 < leaves.size(); ++k) keep.push_back(tq.lca(leaves[k], leaves[k + 1]));
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    ProjectedTree pt;
    pt.m_nodes.reserve(keep.size());
    std::vector<std::uint32_t> stack;
    for (NodeId v : keep) {
        while (!stack.empty() && tq.lca(pt.m_nodes[stack.back()].tnode, v) != pt.m_nodes[stack.back()].tnode)
            stack.pop_back();
        const auto& tn = tree.node(v);
        const std::uint32_t parent = stack.empty() ? ProjectedTree::none : stack.back();
        if (parent == ProjectedTree::none && !pt.m_nodes.empty()) throw std::logic_error("projection has two roots");
        const std::uint32_t id = std::uint32_t(pt.m_nodes.size());
        pt.m_nodes.push_back({v, tn.point, tn.lo, parent, 0});
        stack.push_back(id);
    }
    for (NodeId leaf : leaves) {
        const auto it = std::lower_bound(keep.begin(), keep.end(), leaf);
        const auto u = std::uint32_t(it - keep.begin());
        pt.m_nodes[u].wt = 1;
        pt.m_leaf_lookup.push_back({tree.node(leaf).point, u});
    }
    std::sort(pt.m_leaf_lookup.begin(), pt.m_leaf_lookup.end());

    const std::size_t n = pt.m_nodes.size();
    pt.m_child_begin.assign(n + 1, 0);
    for (std::size_t u = 1; u < n; ++u) ++pt.m_child_begin[pt.m_nodes[u].parent + 1];
    for (std::size_t u = 0; u < n; ++u) pt.m_child_begin[u + 1] += pt.m_child_begin[u];
    pt.m_children.resize(n - 1);
    std::vector<std::uint32_t> fill(pt.m_child_begin.begin(), pt.m_child_begin.end() - 1);
    for (std::uint32_t u = 1; u < n; ++u) pt.m_children[fill[pt.m_nodes[u].parent]++] = u;
    for (std::size_t u = n; u-- > 1;) pt.m_nodes[pt.m_nodes[u].parent].wt += pt.m_nodes[u].wt;
    return pt;
}

/// A node of the uncompacted T|Q: the copy (point, level) inside T node
/// `tnode`, with its weight and closest compacted descendant `below`.
struct UncompactedNode {
    PointId point;
    Level level;
    NodeId tnode;
    std::uint32_t wt;
    std::uint32_t below;
};

inline UncompactedNode projection_root(const ProjectedTree& pt) {
    const auto& r = pt.node(pt.root());
    return {r.point, r.level, r.tnode, r.wt, pt.root()};
}

/// Children of v in the uncompacted T|Q, located by LCA probes against the
/// children of v's copy in T.
inline std::vector<UncompactedNode> children_uncompacted(const Index& idx, const ProjectedTree& pt,
                                                         const UncompactedNode& v) {
    const auto& tq = idx.queries();
    const auto& tree = idx.tree();
    if (v.below >= pt.size()) throw usage_error("compacted descendant out of range");
    const auto& w = pt.node(v.below);
    const bool on_run = v.level >= w.level &&
                        (w.parent == ProjectedTree::none || v.level < pt.node(w.parent).level) &&
                        tq.ancestor_at(w.tnode, v.level) == v.tnode;
    if (!on_run) throw usage_error("compacted node is not the closest descendant of v");

    std::vector<UncompactedNode> out;
    if (v.level == 0) return out;
    const auto& tv = tree.node(v.tnode);
    // the same-point copy one level down stays inside the same T node
    auto probe = [&](NodeId target) -> NodeId {
        if (v.level > tv.lo) return v.tnode;
        for (NodeId x : tree.children(v.tnode))
            if (tq.lca(x, target) == x) return x;
        throw std::logic_error("no child of v leads to the target");
    };
    if (v.level == w.level) {
        for (std::uint32_t u : pt.children(v.below)) {
            const NodeId x = probe(pt.node(u).tnode);
            out.push_back({tree.node(x).point, v.level - 1, x, pt.node(u).wt, u});
        }
    } else {
        const NodeId x = probe(w.tnode);
        out.push_back({tree.node(x).point, v.level - 1, x, v.wt, v.below});
    }
    return out;
}

struct Representative {
    PointId point;
    Level level;
    std::uint32_t wt;
};

struct RepresentativeSet {
    Level k_max = 0;
    std::vector<Representative> reps;
    std::vector<std::uint32_t> of; // subset position -> index into reps

    std::size_t total_weight() const {
        std::size_t s = 0;
        for (const auto& r : reps) s += r.wt;
        return s;
    }
};

/// Maps each subset point to its highest compacted T|Q ancestor whose level
/// is at most k_max (a leaf represents itself when k_max < 0).
inline RepresentativeSet representatives_at(const ProjectedTree& pt, std::span<const PointId> subset, Level k_max) {
    const std::size_t n = pt.size();
    std::vector<std::uint32_t> top(n, ProjectedTree::none);
    for (std::uint32_t u = 0; u < n; ++u) {
        const auto& nd = pt.node(u);
        if (nd.level > k_max && !pt.is_leaf(u)) continue;
        const std::uint32_t p = nd.parent;
        top[u] = (p != ProjectedTree::none && top[p] != ProjectedTree::none) ? top[p] : u;
    }
    RepresentativeSet rs;
    rs.k_max = k_max;
    rs.of.resize(subset.size());
    std::vector<std::uint32_t> slot(n, ProjectedTree::none);
    std::vector<std::uint32_t> used;
    for (std::size_t k = 0; k < subset.size(); ++k) {
        const std::uint32_t leaf = pt.leaf_of(subset[k]);
        if (leaf == ProjectedTree::none) throw usage_error("subset point is not in the projection");
        const std::uint32_t r = top[leaf];
        if (slot[r] == ProjectedTree::none) {
            slot[r] = 0;
            used.push_back(r);
        }
        ++slot[r];
    }
    std::sort(used.begin(), used.end());
    for (std::uint32_t r : used) {
        const std::uint32_t wt = slot[r];
        slot[r] = std::uint32_t(rs.reps.size());
        rs.reps.push_back({pt.node(r).point, pt.node(r).level, wt});
    }
    for (std::size_t k = 0; k < subset.size(); ++k) rs.of[k] = slot[top[pt.leaf_of(subset[k])]];
    return rs;
}

} // namespace nethier
