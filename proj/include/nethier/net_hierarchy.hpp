#pragma once

#include "nethier/error.hpp"
#include "nethier/metric.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nethier {

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = std::numeric_limits<NodeId>::max();

/// Default c-list radius constant. Every algorithm filters its own radius
/// (7, 6, 3, ...) out of this single store.
inline constexpr int default_list_constant = 8;
/// Radius constant used for recursive descendant scans.
inline constexpr int scan_constant = 3;

/// Nested nets Y_0 = M, Y_1, ..., Y_{i_top}. Y_i is a 2^i-net of Y_{i-1}
/// built greedily in ascending id order.
struct NetLevels {
    Level i_top = 0;
    std::vector<Level> top;                   // highest level containing each point
    std::vector<std::vector<PointId>> levels; // Y_0..Y_{i_top}, ascending ids

    bool contains(PointId p, Level i) const noexcept { return i <= 0 || top[p] >= i; }
    std::span<const PointId> net(Level i) const { return levels.at(std::size_t(i)); }
};

/// One contracted run of copies (point, hi), (point, hi-1), ..., (point, lo).
struct TreeNode {
    PointId point = no_point;
    Level hi = 0;
    Level lo = 0;
    NodeId parent = no_node;
};

/// The compacted tree T. Nodes are numbered in DFS preorder (root = 0);
/// children of a node are ordered same-point copy first, then by point id.
class HierarchyTree {
public:
    HierarchyTree() = default;

    /// Assembles a tree from preorder nodes; parent links must reference
    /// earlier nodes. Children order is derived.
    HierarchyTree(std::vector<TreeNode> nodes, std::size_t m) : m_nodes(std::move(nodes)) {
        const std::size_t n = m_nodes.size();
        m_leaf_of.assign(m, no_node);
        m_top_node.assign(m, no_node);
        std::vector<std::uint32_t> count(n + 1, 0);
        for (NodeId v = 0; v < n; ++v) {
            const auto& nd = m_nodes[v];
            if (nd.point >= m) throw data_error("tree node references an unknown point");
            if (v == 0) {
                if (nd.parent != no_node) throw data_error("tree root has a parent");
            } else if (nd.parent >= v) {
                throw data_error("tree nodes are not in preorder");
            } else {
                ++count[nd.parent + 1];
            }
            if (nd.lo == 0) m_leaf_of[nd.point] = v;
            if (m_top_node[nd.point] == no_node) m_top_node[nd.point] = v;
        }
        for (std::size_t v = 0; v < n; ++v) count[v + 1] += count[v];
        m_child_begin = count;
        m_children.resize(n == 0 ? 0 : n - 1);
        std::vector<std::uint32_t> fill(count.begin(), count.end() - 1);
        for (NodeId v = 1; v < n; ++v) m_children[fill[m_nodes[v].parent]++] = v;
        for (NodeId v = 0; v < n; ++v) {
            auto first = m_children.begin() + m_child_begin[v];
            auto last = m_children.begin() + m_child_begin[v + 1];
            const PointId self = m_nodes[v].point;
            std::sort(first, last, [&](NodeId a, NodeId b) {
                const bool sa = m_nodes[a].point == self, sb = m_nodes[b].point == self;
                if (sa != sb) return sa;
                return m_nodes[a].point < m_nodes[b].point;
            });
        }
        for (PointId p = 0; p < m; ++p)
            if (m_leaf_of[p] == no_node) throw data_error("point without a leaf in the tree");
    }

    std::size_t size() const noexcept { return m_nodes.size(); }
    NodeId root() const noexcept { return 0; }
    const TreeNode& node(NodeId v) const { return m_nodes[v]; }
    std::span<const TreeNode> nodes() const noexcept { return m_nodes; }
    std::span<const NodeId> children(NodeId v) const {
        return {m_children.data() + m_child_begin[v], m_child_begin[v + 1] - m_child_begin[v]};
    }
    bool is_leaf(NodeId v) const { return m_child_begin[v + 1] == m_child_begin[v]; }
    NodeId leaf(PointId p) const { return m_leaf_of[p]; }
    /// Node holding the highest copy of p.
    NodeId top_node(PointId p) const { return m_top_node[p]; }

private:
    std::vector<TreeNode> m_nodes;
    std::vector<std::uint32_t> m_child_begin;
    std::vector<NodeId> m_children;
    std::vector<NodeId> m_leaf_of;
    std::vector<NodeId> m_top_node;
};

/// Nontrivial c-lists L(y,i,c) = { z in Y_{i-1} : d(y,z) <= c 2^i }, in CSR
/// form grouped by point and sorted by level. A missing (y,i) entry means
/// the trivial list {y}.
class CListStore {
public:
    struct Entry {
        PointId point;
        Level level;
        std::vector<PointId> members; // ascending ids
    };

    CListStore() = default;

    /// Entries must be sorted by (point, level).
    CListStore(int c, std::size_t m, std::span<const Entry> entries) : m_c(c) {
        m_point_begin.assign(m + 1, 0);
        m_entry_level.reserve(entries.size());
        m_entry_begin.assign(1, 0);
        m_entry_begin.reserve(entries.size() + 1);
        for (const auto& e : entries) {
            ++m_point_begin[e.point + 1];
            m_entry_level.push_back(e.level);
            m_payload.insert(m_payload.end(), e.members.begin(), e.members.end());
            m_entry_begin.push_back(m_payload.size());
        }
        for (std::size_t p = 0; p < m; ++p) m_point_begin[p + 1] += m_point_begin[p];
    }

    /// Raw CSR arrays (persistence path).
    CListStore(int c, std::vector<std::uint32_t> point_begin, std::vector<Level> entry_level,
               std::vector<std::uint64_t> entry_begin, std::vector<PointId> payload)
        : m_c(c), m_point_begin(std::move(point_begin)), m_entry_level(std::move(entry_level)),
          m_entry_begin(std::move(entry_begin)), m_payload(std::move(payload)) {
        if (m_point_begin.empty() || m_entry_begin.size() != m_entry_level.size() + 1 ||
            m_point_begin.back() != m_entry_level.size() || m_entry_begin.back() != m_payload.size())
            throw data_error("inconsistent c-list arrays");
    }

    int c() const noexcept { return m_c; }
    std::size_t nontrivial_count() const noexcept { return m_entry_level.size(); }
    std::size_t payload_size() const noexcept { return m_payload.size(); }

    /// Stored list of (y,i), or an empty span when the list is trivial.
    std::span<const PointId> find(PointId y, Level i) const {
        const auto first = m_entry_level.begin() + m_point_begin[y];
        const auto last = m_entry_level.begin() + m_point_begin[y + 1];
        const auto it = std::lower_bound(first, last, i);
        if (it == last || *it != i) return {};
        const std::size_t e = std::size_t(it - m_entry_level.begin());
        return {m_payload.data() + m_entry_begin[e], std::size_t(m_entry_begin[e + 1] - m_entry_begin[e])};
    }

    std::span<const std::uint32_t> point_begin() const noexcept { return m_point_begin; }
    std::span<const Level> entry_level() const noexcept { return m_entry_level; }
    std::span<const std::uint64_t> entry_begin() const noexcept { return m_entry_begin; }
    std::span<const PointId> payload() const noexcept { return m_payload; }

private:
    int m_c = default_list_constant;
    std::vector<std::uint32_t> m_point_begin{0};
    std::vector<Level> m_entry_level;
    std::vector<std::uint64_t> m_entry_begin{0};
    std::vector<PointId> m_payload;
};

struct Hierarchy {
    NetLevels nets;
    HierarchyTree tree;
    CListStore lists;
};

namespace detail {

/// Incremental insertion in ascending id order. Greedy-in-id-order nets only
/// depend on smaller ids, so after inserting x its levels are final.
/// Navigation uses 1-lists arcs[y][j-1] = { z in Y_{j-1} : d(y,z) <= 2^j }.
struct NetBuild {
    std::vector<Level> top;
    std::vector<PointId> parent; // T-parent point of each point's top copy
};

inline NetBuild build_nets(const PointSet& ps, Level i_top) {
    const std::size_t m = ps.size();
    NetBuild out;
    out.top.assign(m, 0);
    out.parent.assign(m, no_point);
    if (m == 0) return out;
    out.top[0] = i_top;

    std::vector<std::vector<std::vector<PointId>>> arcs(m);
    arcs[0].assign(std::size_t(i_top), std::vector<PointId>{0});

    std::vector<std::uint64_t> mark(m, 0);
    std::uint64_t tick = 0;
    struct Near {
        PointId id;
        double d;
    };
    std::vector<std::vector<Near>> zone(std::size_t(i_top) + 1);
    std::vector<char> covered(std::size_t(i_top) + 1, 0);

    for (PointId x = 1; x < m; ++x) {
        // zone[j] = { z in Y_j, z < x : d(x,z) <= 2^{j+1} }
        for (auto& z : zone) z.clear();
        zone[i_top].push_back({0, ps(x, 0)});
        for (Level j = i_top; j >= 1; --j) {
            const double cover_r = pow2(j);
            covered[j] = 0;
            for (const auto& z : zone[j])
                if (z.d < cover_r) {
                    covered[j] = 1;
                    break;
                }
            ++tick;
            auto& below = zone[j - 1];
            for (const auto& p : zone[j]) {
                for (PointId z : arcs[p.id][j - 1]) {
                    if (mark[z] == tick) continue;
                    mark[z] = tick;
                    const double dz = ps(x, z);
                    if (dz <= cover_r) below.push_back({z, dz});
                }
            }
        }
        Level t = 0;
        for (Level j = 1; j <= i_top; ++j)
            if (covered[j]) {
                t = j - 1;
                break;
            }
        out.top[x] = t;

        PointId par = no_point;
        for (const auto& z : zone[t + 1])
            if (z.d <= pow2(t + 1) && z.id < par) par = z.id;
        assert(par != no_point);
        out.parent[x] = par;

        arcs[x].resize(std::size_t(t));
        for (Level j = 1; j <= t; ++j) {
            auto& own = arcs[x][j - 1];
            own.reserve(zone[j - 1].size() + 1);
            for (const auto& z : zone[j - 1]) own.push_back(z.id);
            own.push_back(x);
        }
        for (Level j = 1; j <= t + 1; ++j)
            for (const auto& z : zone[j])
                if (z.d <= pow2(j)) arcs[z.id][j - 1].push_back(x);
    }
    return out;
}

} // namespace detail

/// Builds nets, the compacted tree, and the c-list store. Deterministic.
/// `i_top` may be supplied when the diameter is already known.
inline Hierarchy build_hierarchy(const PointSet& ps, int c = default_list_constant, Level i_top = -1) {
    if (c < 7) throw usage_error("c-list constant must be at least 7");
    const std::size_t m = ps.size();
    if (m == 0) throw data_error("empty point set");
    if (i_top < 0) i_top = m >= 2 ? top_level_for(ps.pair_extrema().second) : 0;

    Hierarchy h;
    const detail::NetBuild nb = detail::build_nets(ps, i_top);

    h.nets.i_top = i_top;
    h.nets.top = nb.top;
    h.nets.levels.assign(std::size_t(i_top) + 1, {});
    for (PointId p = 0; p < m; ++p)
        for (Level j = 0; j <= nb.top[p]; ++j) h.nets.levels[j].push_back(p);

    // T-children introduced at each level: point z with top t < i_top hangs
    // under (parent[z], t+1). Grouped per parent, sorted by (level, id).
    std::vector<std::uint32_t> kid_begin(m + 1, 0);
    for (PointId z = 1; z < m; ++z) ++kid_begin[nb.parent[z] + 1];
    for (std::size_t p = 0; p < m; ++p) kid_begin[p + 1] += kid_begin[p];
    std::vector<PointId> kids(m > 0 ? m - 1 : 0);
    {
        std::vector<std::uint32_t> fill(kid_begin.begin(), kid_begin.end() - 1);
        for (PointId z = 1; z < m; ++z) kids[fill[nb.parent[z]]++] = z;
        for (PointId p = 0; p < m; ++p)
            std::sort(kids.begin() + kid_begin[p], kids.begin() + kid_begin[p + 1], [&](PointId a, PointId b) {
                if (nb.top[a] != nb.top[b]) return nb.top[a] < nb.top[b];
                return a < b;
            });
    }
    // Children of (w, j) at level j-1, excluding w's own copy.
    auto new_children = [&](PointId w, Level j) {
        auto first = kids.begin() + kid_begin[w];
        auto last = kids.begin() + kid_begin[w + 1];
        auto lo = std::partition_point(first, last, [&](PointId z) { return nb.top[z] < j - 1; });
        auto hi = std::partition_point(lo, last, [&](PointId z) { return nb.top[z] < j; });
        return std::span<const PointId>(kids.data() + (lo - kids.begin()), std::size_t(hi - lo));
    };

    // Top-down c-lists. L(y,j) is drawn from the T-children of members of
    // L(p,j+1), p = T-parent of (y,j): valid since c >= 3.
    std::vector<CListStore::Entry> entries;
    std::vector<std::uint32_t> slot(m, 0);
    std::vector<std::vector<PointId>> upper, current;
    const double c_d = c;
    for (Level j = i_top; j >= 1; --j) {
        const auto& Yj = h.nets.levels[j];
        current.assign(Yj.size(), {});
        for (std::size_t k = 0; k < Yj.size(); ++k) {
            const PointId y = Yj[k];
            auto& list = current[k];
            const double radius = c_d * pow2(j);
            auto consider = [&](PointId w) {
                if (ps(y, w) <= radius) list.push_back(w);
                for (PointId z : new_children(w, j))
                    if (ps(y, z) <= radius) list.push_back(z);
            };
            if (j == i_top) {
                for (PointId w : Yj) consider(w);
            } else {
                const PointId p = nb.top[y] > j ? y : nb.parent[y];
                for (PointId w : upper[slot[p]]) consider(w);
            }
            std::sort(list.begin(), list.end());
        }
        for (std::size_t k = 0; k < Yj.size(); ++k)
            if (current[k].size() > 1) entries.push_back({Yj[k], j, current[k]});
        for (std::size_t k = 0; k < Yj.size(); ++k) slot[Yj[k]] = std::uint32_t(k);
        upper.swap(current);
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.point != b.point ? a.point < b.point : a.level < b.level;
    });
    h.lists = CListStore(c, m, entries);

    // Compacted tree. A copy (y,j), j >= 1, is contracted into the run below
    // it iff its c-list is trivial (which implies it is non-branching).
    std::vector<std::vector<std::pair<Level, Level>>> runs(m); // (hi, lo), top-down
    for (PointId y = 0; y < m; ++y) {
        Level hi = nb.top[y];
        for (Level j = nb.top[y]; j >= 0; --j) {
            if (j == 0 || !h.lists.find(y, j).empty()) {
                runs[y].push_back({hi, j});
                hi = j - 1;
            }
        }
    }
    // Children of each run, ordered same-point first then by point id.
    struct RunRef {
        PointId point;
        std::uint32_t run;
    };
    std::vector<std::vector<std::vector<RunRef>>> run_children(m);
    for (PointId y = 0; y < m; ++y) run_children[y].resize(runs[y].size());
    for (PointId y = 0; y < m; ++y) {
        for (std::uint32_t r = 1; r < runs[y].size(); ++r) run_children[y][r - 1].push_back({y, r});
    }
    for (PointId z = 1; z < m; ++z) {
        const PointId p = nb.parent[z];
        const Level at = nb.top[z] + 1;
        std::uint32_t r = 0;
        while (r < runs[p].size() && runs[p][r].second != at) ++r;
        if (r == runs[p].size()) throw std::logic_error("tree parent copy is not a run bottom");
        run_children[p][r].push_back({z, 0});
    }
    for (auto& per_point : run_children)
        for (std::size_t r = 0; r < per_point.size(); ++r) {
            auto& ch = per_point[r];
            // the same-point child (if any) is first already; sort the rest
            const std::size_t skip = (!ch.empty() && ch.front().run != 0) ? 1 : 0;
            std::sort(ch.begin() + skip, ch.end(), [](const RunRef& a, const RunRef& b) { return a.point < b.point; });
        }

    std::vector<TreeNode> nodes;
    nodes.reserve(m + entries.size());
    struct Frame {
        RunRef ref;
        NodeId parent;
    };
    std::vector<Frame> stack{{{0, 0}, no_node}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        const auto [hi, lo] = runs[f.ref.point][f.ref.run];
        const NodeId id = NodeId(nodes.size());
        nodes.push_back({f.ref.point, hi, lo, f.parent});
        const auto& ch = run_children[f.ref.point][f.ref.run];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back({*it, id});
    }
    h.tree = HierarchyTree(std::move(nodes), m);
    return h;
}

/// Point whose copy is y's ancestor in T at level 1 (y itself when y is in Y_1).
inline PointId level_one_anchor(const Hierarchy& h, PointId y) {
    if (h.nets.top[y] >= 1) return y;
    const NodeId leaf = h.tree.leaf(y);
    return h.tree.node(h.tree.node(leaf).parent).point;
}

/// L(y,i,c_query) = { z in Y_{i-1} : d(y,z) <= c_query 2^i }, filtered from the
/// store. For i <= 0 (where Y_i := M) the list is filtered on the fly from the
/// level-1 list of y's level-1 ancestor.
inline std::vector<PointId> c_list(const PointSet& ps, const Hierarchy& h, PointId y, Level i, double c_query) {
    if (y >= ps.size()) throw data_error("point id out of range");
    if (!(c_query >= 1.0) || c_query > h.lists.c())
        throw usage_error("c-list query radius must lie in [1, store c]");
    if (i > h.nets.i_top) throw usage_error("level above the top of the hierarchy");
    if (!h.nets.contains(y, i)) throw usage_error("point is not in the requested net");
    const double radius = c_query * pow2(i);
    std::vector<PointId> out;
    if (i >= 1) {
        const auto stored = h.lists.find(y, i);
        if (stored.empty()) return {y};
        if (c_query == h.lists.c()) return {stored.begin(), stored.end()};
        for (PointId z : stored)
            if (ps(y, z) <= radius) out.push_back(z);
        return out;
    }
    if (h.nets.i_top < 1) return {y};
    const PointId anchor = level_one_anchor(h, y);
    const auto stored = h.lists.find(anchor, 1);
    // a trivial anchor list means y is the anchor and has no neighbour within 2c
    if (stored.empty()) return {y};
    for (PointId z : stored)
        if (ps(y, z) <= radius) out.push_back(z);
    return out;
}

/// Recursive scan: from the seeds (all in Y_from) down to level `to`,
/// returning the deduplicated set reached at level `to`.
inline std::vector<PointId> scan_down(const PointSet& ps, const Hierarchy& h, std::vector<PointId> seeds, Level from,
                                      Level to, double c_scan = scan_constant) {
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    std::vector<PointId> next;
    for (Level l = from; l > to; --l) {
        // below this level every list is trivial (minimum distance is 1)
        if (l <= 0 && c_scan * pow2(l) < 1.0) break;
        next.clear();
        for (PointId y : seeds) {
            const auto lst = c_list(ps, h, y, l, c_scan);
            next.insert(next.end(), lst.begin(), lst.end());
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        seeds.swap(next);
    }
    return seeds;
}

/// Descendants search with refinement eps from (y,i): every x with
/// d(x,y) <= 2^i has a returned x' with d(x,x') <= eps 2^i.
inline std::vector<PointId> descendants_search(const PointSet& ps, const Hierarchy& h, PointId y, Level i,
                                               double eps) {
    if (!(eps > 0.0 && eps <= 0.5)) throw usage_error("refinement eps must lie in (0, 1/2]");
    if (y >= ps.size()) throw data_error("point id out of range");
    if (!h.nets.contains(y, i)) throw usage_error("point is not in the requested net");
    const Level target = i - log2_inverse_ceil(eps) - 1;
    return scan_down(ps, h, {y}, i, target);
}

/// Whether x (as a member of Y_j) is reachable from (y,i) by a recursive scan
/// of radius-c_query lists. Test-oriented.
inline bool is_c_list_descendant(const PointSet& ps, const Hierarchy& h, PointId y, Level i, PointId x, Level j,
                                 double c_query) {
    if (j >= i) throw usage_error("descendant level must be below the ancestor level");
    if (!h.nets.contains(x, j)) return false;
    const auto reached = scan_down(ps, h, {y}, i, j, c_query);
    return std::binary_search(reached.begin(), reached.end(), x);
}

} // namespace nethier
