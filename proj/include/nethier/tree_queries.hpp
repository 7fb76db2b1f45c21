#pragma once

#include "nethier/net_hierarchy.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace nethier {

/// Navigation over the compacted tree: DFS leaf ranks, O(1) LCA via an Euler
/// tour and a sparse-table range minimum, and level ancestors via binary
/// lifting over the compacted root path (O(log log Delta) per query).
class TreeQueries {
public:
    TreeQueries() = default;

    explicit TreeQueries(const HierarchyTree& tree) : m_tree(&tree) {
        const std::size_t n = tree.size();
        const std::size_t m = n == 0 ? 0 : count_points(tree);
        m_depth.assign(n, 0);
        m_first.assign(n, 0);
        m_rank.assign(m, 0);
        m_leaf_order.clear();
        m_euler.clear();
        m_euler.reserve(2 * n);

        // Preorder numbering makes leaves appear in DFS order by node id.
        for (NodeId v = 0; v < n; ++v) {
            if (v > 0) m_depth[v] = m_depth[tree.node(v).parent] + 1;
            if (tree.is_leaf(v)) {
                m_rank[tree.node(v).point] = std::uint32_t(m_leaf_order.size());
                m_leaf_order.push_back(tree.node(v).point);
            }
        }

        struct Frame {
            NodeId v;
            std::uint32_t next;
        };
        std::vector<Frame> stack;
        if (n > 0) stack.push_back({0, 0});
        while (!stack.empty()) {
            auto& f = stack.back();
            if (f.next == 0) m_first[f.v] = std::uint32_t(m_euler.size());
            m_euler.push_back(f.v);
            const auto ch = tree.children(f.v);
            if (f.next < ch.size()) {
                const NodeId c = ch[f.next++];
                stack.push_back({c, 0});
            } else {
                stack.pop_back();
            }
        }

        const std::size_t e = m_euler.size();
        m_log_levels = e == 0 ? 0 : std::size_t(std::bit_width(e));
        m_sparse.assign(m_log_levels * e, 0);
        for (std::size_t i = 0; i < e; ++i) m_sparse[i] = m_euler[i];
        for (std::size_t k = 1; k < m_log_levels; ++k) {
            const std::size_t half = std::size_t(1) << (k - 1);
            for (std::size_t i = 0; i + (std::size_t(1) << k) <= e; ++i) {
                const NodeId a = m_sparse[(k - 1) * e + i], b = m_sparse[(k - 1) * e + i + half];
                m_sparse[k * e + i] = m_depth[a] <= m_depth[b] ? a : b;
            }
        }

        std::uint32_t max_depth = 0;
        for (auto d : m_depth) max_depth = std::max(max_depth, d);
        m_jump_levels = std::size_t(std::bit_width(std::uint32_t(max_depth))) + 1;
        m_up.assign(m_jump_levels * n, 0);
        for (NodeId v = 0; v < n; ++v) m_up[v] = v == 0 ? 0 : tree.node(v).parent;
        for (std::size_t k = 1; k < m_jump_levels; ++k)
            for (NodeId v = 0; v < n; ++v) m_up[k * n + v] = m_up[(k - 1) * n + m_up[(k - 1) * n + v]];
    }

    const HierarchyTree& tree() const { return *m_tree; }

    std::uint32_t depth(NodeId v) const { return m_depth[v]; }

    NodeId lca(NodeId u, NodeId v) const {
        const std::size_t n = m_depth.size();
        if (u >= n || v >= n) throw usage_error("node id out of range");
        std::size_t l = m_first[u], r = m_first[v];
        if (l > r) std::swap(l, r);
        const std::size_t k = std::size_t(std::bit_width(r - l + 1)) - 1;
        const std::size_t e = m_euler.size();
        const NodeId a = m_sparse[k * e + l], b = m_sparse[k * e + r + 1 - (std::size_t(1) << k)];
        return m_depth[a] <= m_depth[b] ? a : b;
    }

    /// The node on v's root path whose level range contains i (lo(v) <= i).
    NodeId ancestor_at(NodeId v, Level i) const {
        const auto& t = *m_tree;
        if (i < t.node(v).lo || i > t.node(0).hi) throw usage_error("level outside the node's root path");
        if (t.node(v).hi >= i) return v;
        const std::size_t n = m_depth.size();
        for (std::size_t k = m_jump_levels; k-- > 0;) {
            const NodeId u = m_up[k * n + v];
            if (t.node(u).hi < i) v = u;
        }
        return t.node(v).parent;
    }

    /// q's ancestor in the uncompacted tree at level i: (point, compacted node).
    std::pair<PointId, NodeId> level_ancestor(PointId q, Level i) const {
        const auto& t = *m_tree;
        if (q >= m_rank.size()) throw data_error("point id out of range");
        if (i < 0 || i > t.node(0).hi) throw usage_error("level out of range");
        const NodeId v = ancestor_at(t.leaf(q), i);
        return {t.node(v).point, v};
    }

    std::uint32_t dfs_rank(PointId q) const {
        if (q >= m_rank.size()) throw data_error("point id out of range");
        return m_rank[q];
    }
    std::span<const PointId> leaf_order() const noexcept { return m_leaf_order; }
    std::span<const NodeId> euler_tour() const noexcept { return m_euler; }

private:
    static std::size_t count_points(const HierarchyTree& tree) {
        std::size_t leaves = 0;
        for (NodeId v = 0; v < tree.size(); ++v)
            if (tree.is_leaf(v)) ++leaves;
        return leaves;
    }

    const HierarchyTree* m_tree = nullptr;
    std::vector<std::uint32_t> m_depth;
    std::vector<std::uint32_t> m_first;
    std::vector<NodeId> m_euler;
    std::size_t m_log_levels = 0;
    std::vector<NodeId> m_sparse;
    std::size_t m_jump_levels = 0;
    std::vector<NodeId> m_up;
    std::vector<std::uint32_t> m_rank;
    std::vector<PointId> m_leaf_order;
};

} // namespace nethier
