#include "nethier/corpus.hpp"
#include "nethier/index.hpp"
#include "nethier/oracle.hpp"
#include "nethier/projected_tree.hpp"
#include "support/compare.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

using namespace nethier;

namespace {

Index four_point_line() { return Index::build(PointSet::from_coords(1, {0, 1, 2, 4})); }

std::vector<PointId> random_subset(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    std::vector<PointId> all(m);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(n, m));
    return all;
}

} // namespace

TEST(BuildProjection, SingleLeaf) {
    const auto idx = four_point_line();
    const std::vector<PointId> q{2};
    const auto pt = build_projection(idx, q);
    ASSERT_EQ(pt.size(), 1u);
    EXPECT_EQ(pt.node(0).point, 2u);
    EXPECT_EQ(pt.node(0).wt, 1u);
    EXPECT_EQ(pt.root_level(), 0);
}

TEST(BuildProjection, TwoFarLeaves) {
    const auto idx = four_point_line();
    const std::vector<PointId> q{3, 1};
    const auto pt = build_projection(idx, q);
    ASSERT_EQ(pt.size(), 3u);
    EXPECT_EQ(pt.node(0).tnode, idx.lca(idx.tree().leaf(1), idx.tree().leaf(3)));
    EXPECT_EQ(pt.node(0).wt, 2u);
    const auto kids = pt.children(0);
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(pt.node(kids[0]).wt, 1u);
    EXPECT_EQ(pt.node(kids[1]).wt, 1u);
}

TEST(BuildProjection, FullSet) {
    const auto idx = Index::build(corpus::generate(corpus::Family::grid2d, 120, 3));
    std::vector<PointId> all(idx.size());
    std::iota(all.begin(), all.end(), 0);
    const auto pt = build_projection(idx, all);
    EXPECT_EQ(pt.node(0).wt, idx.size());
    for (std::uint32_t u = 0; u < pt.size(); ++u) {
        if (pt.is_leaf(u)) continue;
        std::uint32_t s = 0;
        for (auto c : pt.children(u)) s += pt.node(c).wt;
        EXPECT_EQ(s, pt.node(u).wt);
    }
}

TEST(BuildProjection, RejectsBadQueries) {
    const auto idx = four_point_line();
    EXPECT_THROW(build_projection(idx, std::vector<PointId>{}), usage_error);
    EXPECT_THROW(build_projection(idx, std::vector<PointId>{0, 9}), data_error);
    EXPECT_THROW(build_projection(idx, std::vector<PointId>{1, 1}), data_error);
}

TEST(BuildProjection, MatchesInducedSubtreeOracle) {
    std::mt19937_64 rng(12);
    for (auto fam : {corpus::Family::line, corpus::Family::grid2d, corpus::Family::gaussian_mixture}) {
        const auto ps = corpus::generate(fam, 150, 5);
        const auto idx = Index::build(ps);
        const auto naive = oracle::naive_build(ps, 8);
        for (int trial = 0; trial < 15; ++trial) {
            const auto q = random_subset(rng, ps.size(), 1 + rng() % 40);
            const auto pt = build_projection(idx, q);
            ASSERT_EQ(check::projection_nodes(pt), oracle::naive_projection(naive, q)) << corpus::to_string(fam);
        }
    }
}

namespace {

/// Expands the uncompacted T|Q from the root and records (point, level) -> wt.
std::map<std::pair<PointId, Level>, std::uint32_t> expand(const Index& idx, const ProjectedTree& pt) {
    std::map<std::pair<PointId, Level>, std::uint32_t> out;
    std::vector<UncompactedNode> stack{projection_root(pt)};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        out[{v.point, v.level}] = v.wt;
        const auto kids = children_uncompacted(idx, pt, v);
        if (kids.size() == 1) EXPECT_EQ(kids[0].wt, v.wt);
        for (const auto& k : kids) stack.push_back(k);
    }
    return out;
}

} // namespace

TEST(ChildrenUncompacted, MatchesInducedSubtree) {
    std::mt19937_64 rng(4);
    const auto ps = corpus::generate(corpus::Family::gaussian_mixture, 200, 9);
    const auto idx = Index::build(ps);
    const auto naive = oracle::naive_build(ps, 8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto q = random_subset(rng, ps.size(), 2 + rng() % 30);
        const auto pt = build_projection(idx, q);
        const auto got = expand(idx, pt);
        // oracle: every copy on a root path of a Q leaf, up to the projection root level
        std::map<std::pair<PointId, Level>, std::uint32_t> want;
        for (PointId leaf : q) {
            PointId p = leaf;
            for (Level i = 0; i <= pt.root_level(); ++i) {
                ++want[{p, i}];
                if (i < naive.i_top) p = naive.parent_of(p, i);
            }
        }
        ASSERT_EQ(got, want);
    }
}

TEST(ChildrenUncompacted, LeafHasNoChildren) {
    const auto idx = four_point_line();
    const auto pt = build_projection(idx, std::vector<PointId>{1, 3});
    const auto leaf = pt.leaf_of(1);
    const auto& n = pt.node(leaf);
    EXPECT_TRUE(children_uncompacted(idx, pt, {n.point, 0, n.tnode, 1, leaf}).empty());
    // a compacted node that is not below v is rejected
    const auto other = pt.leaf_of(3);
    EXPECT_THROW(children_uncompacted(idx, pt, {n.point, 0, n.tnode, 1, other}), usage_error);
}

TEST(Representatives, ThresholdExtremes) {
    std::mt19937_64 rng(8);
    const auto idx = Index::build(corpus::generate(corpus::Family::grid2d, 200, 1));
    const auto q = random_subset(rng, idx.size(), 50);
    const auto pt = build_projection(idx, q);

    auto rs = representatives_at(pt, q, 0);
    EXPECT_EQ(rs.reps.size(), q.size());
    for (const auto& r : rs.reps) EXPECT_EQ(r.wt, 1u);

    rs = representatives_at(pt, q, -3);
    EXPECT_EQ(rs.reps.size(), q.size());

    rs = representatives_at(pt, q, pt.root_level());
    ASSERT_EQ(rs.reps.size(), 1u);
    EXPECT_EQ(rs.reps[0].point, pt.node(0).point);
    EXPECT_EQ(rs.reps[0].wt, q.size());
}

TEST(Representatives, PartitionAndDistanceBound) {
    std::mt19937_64 rng(5);
    for (auto fam : {corpus::Family::line, corpus::Family::grid2d, corpus::Family::gaussian_mixture}) {
        const auto idx = Index::build(corpus::generate(fam, 300, 3));
        const auto q = random_subset(rng, idx.size(), 64);
        const auto pt = build_projection(idx, q);
        const std::vector<PointId> subset(q.begin(), q.begin() + 40);
        for (Level k = -1; k <= pt.root_level() + 1; ++k) {
            const auto rs = representatives_at(pt, subset, k);
            EXPECT_EQ(rs.total_weight(), subset.size());
            for (std::size_t j = 0; j < subset.size(); ++j) {
                const auto& r = rs.reps[rs.of[j]];
                EXPECT_LE(r.level, std::max(k, 0));
                EXPECT_LE(idx.distance(subset[j], r.point), pow2(r.level + 1));
            }
        }
    }
}
