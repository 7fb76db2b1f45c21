#include "nethier/corpus.hpp"
#include "nethier/index.hpp"
#include "nethier/oracle.hpp"
#include "support/compare.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nethier;

namespace {

Index line_index(std::vector<double> xs, int c = 8) { return Index::build(PointSet::from_coords(1, std::move(xs)), c); }

std::vector<PointId> ids(std::span<const PointId> s) { return {s.begin(), s.end()}; }

} // namespace

TEST(BuildHierarchy, FourPointLineNets) {
    const auto idx = line_index({0, 1, 2, 4});
    ASSERT_EQ(idx.i_top(), 3);
    EXPECT_EQ(ids(idx.nets().net(0)), (std::vector<PointId>{0, 1, 2, 3}));
    EXPECT_EQ(ids(idx.nets().net(1)), (std::vector<PointId>{0, 2, 3}));
    EXPECT_EQ(ids(idx.nets().net(2)), (std::vector<PointId>{0, 3}));
    EXPECT_EQ(ids(idx.nets().net(3)), (std::vector<PointId>{0}));
    const auto& root = idx.tree().node(idx.tree().root());
    EXPECT_EQ(root.point, 0u);
    EXPECT_EQ(root.hi, 3);
}

TEST(BuildHierarchy, TwoPoints) {
    const auto idx = line_index({0, 1});
    ASSERT_EQ(idx.i_top(), 1);
    EXPECT_EQ(ids(idx.nets().net(1)), (std::vector<PointId>{0}));
    const auto& t = idx.tree();
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t.node(0).point, 0u);
    EXPECT_EQ(t.node(0).hi, 1);
    EXPECT_EQ(t.node(0).lo, 1);
    const auto kids = t.children(0);
    ASSERT_EQ(kids.size(), 2u);
    EXPECT_EQ(t.node(kids[0]).point, 0u);
    EXPECT_EQ(t.node(kids[1]).point, 1u);
    EXPECT_TRUE(t.is_leaf(kids[0]));
    EXPECT_TRUE(t.is_leaf(kids[1]));
}

TEST(BuildHierarchy, SinglePoint) {
    const auto idx = line_index({3.5});
    EXPECT_EQ(idx.i_top(), 0);
    EXPECT_EQ(idx.tree().size(), 1u);
    EXPECT_EQ(idx.lists().nontrivial_count(), 0u);
    EXPECT_EQ(idx.c_list(0, 0, 8), (std::vector<PointId>{0}));
    EXPECT_EQ(idx.descendants_search(0, 0, 0.5), (std::vector<PointId>{0}));
}

TEST(BuildHierarchy, RejectsSmallConstant) {
    EXPECT_THROW(line_index({0, 1}, 6), usage_error);
}

TEST(CList, FourPointLineExamples) {
    const auto idx = line_index({0, 1, 2, 4});
    // point ids: 0->x0, 1->x1, 2->x2, 3->x4
    EXPECT_EQ(idx.c_list(0, 2, 2), (std::vector<PointId>{0, 2, 3}));
    EXPECT_EQ(idx.c_list(0, 3, 1), (std::vector<PointId>{0, 3}));
    EXPECT_EQ(idx.c_list(0, 1, 1), (std::vector<PointId>{0, 1, 2}));
    EXPECT_EQ(idx.c_list(0, 0, 1), (std::vector<PointId>{0, 1}));
    EXPECT_EQ(idx.c_list(1, -1, 1), (std::vector<PointId>{1}));
    EXPECT_THROW(idx.c_list(0, 2, 9), usage_error);
    EXPECT_THROW(idx.c_list(1, 1, 2), usage_error);
    EXPECT_THROW(idx.c_list(0, 4, 2), usage_error);
}

TEST(CList, TrivialList) {
    // a close pair far from a third point: middle levels have trivial lists
    const auto idx = line_index({0, 1, 1000});
    ASSERT_EQ(idx.i_top(), 10);
    EXPECT_EQ(idx.c_list(0, 10, 8), (std::vector<PointId>{0, 2}));
    EXPECT_EQ(idx.c_list(0, 5, 8), (std::vector<PointId>{0}));
    EXPECT_TRUE(idx.lists().find(0, 5).empty());
    EXPECT_EQ(idx.c_list(0, 1, 8), (std::vector<PointId>{0, 1}));
}

TEST(DescendantsSearch, HalfRefinementOnLine) {
    const auto idx = line_index({0, 1, 2, 4});
    EXPECT_EQ(idx.descendants_search(0, 2, 0.5), (std::vector<PointId>{0, 1, 2, 3}));
    EXPECT_THROW(idx.descendants_search(0, 2, 0.75), usage_error);
    EXPECT_THROW(idx.descendants_search(0, 2, 0.0), usage_error);
    // bottoming out below level 0 returns points of M
    const auto low = idx.descendants_search(0, 1, 0.25);
    EXPECT_TRUE(std::is_sorted(low.begin(), low.end()));
    EXPECT_EQ(low.front(), 0u);
}

TEST(DescendantsSearch, CoverageNeedsOneExtraLevel) {
    // one-level-shallower stopping would return only {0} and miss x=4.5
    const auto idx = line_index({0, 3.5, 4.5});
    const auto got = idx.descendants_search(0, 3, 0.5);
    for (PointId x = 0; x < 3; ++x) {
        if (idx.distance(x, 0) > 8) continue;
        double best = 1e300;
        for (PointId g : got) best = std::min(best, idx.distance(x, g));
        EXPECT_LE(best, 4.0);
    }
}

TEST(CListDescendant, SelfCopyAndFarPoints) {
    const auto idx = line_index({0, 1, 2, 4});
    EXPECT_TRUE(idx.is_c_list_descendant(0, 3, 0, 2, 8));
    EXPECT_TRUE(idx.is_c_list_descendant(3, 2, 3, 1, 1));
    const auto far = line_index({0, 1, 200});
    // d = 200 > 8 * 2^{i+1} for i = 2
    EXPECT_FALSE(far.is_c_list_descendant(0, 2, 2, 0, 8));
    EXPECT_THROW(idx.is_c_list_descendant(0, 2, 0, 2, 8), usage_error);
}

TEST(OracleEquivalence, SmallLine) {
    const auto ps = PointSet::from_coords(1, {0, 1, 2, 4});
    const auto idx = Index::build(ps);
    EXPECT_EQ(check::diff_structure(idx, oracle::naive_build(ps, 8)), "");
}

TEST(OracleEquivalence, RandomCorpora) {
    for (auto fam : {corpus::Family::line, corpus::Family::grid2d, corpus::Family::gaussian_mixture}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            const auto ps = corpus::generate(fam, 40 + 30 * seed, seed);
            const auto idx = Index::build(ps);
            EXPECT_EQ(check::diff_structure(idx, oracle::naive_build(ps, 8)), "")
                << corpus::to_string(fam) << " seed " << seed;
            EXPECT_EQ(check::net_axiom_violations(idx), 0u);
        }
    }
}

TEST(OracleEquivalence, MatrixBackingAndLargerConstant) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 30);
    const std::size_t m = 50;
    std::vector<double> xyz(3 * m);
    for (auto& v : xyz) v = u(rng);
    const auto pc = PointSet::from_coords(3, xyz, Norm::L1);
    std::vector<double> mat(m * m);
    for (PointId a = 0; a < m; ++a)
        for (PointId b = 0; b < m; ++b) mat[a * m + b] = pc(a, b);
    const auto pm = PointSet::from_matrix(m, mat);
    const auto idx = Index::build(pm, 16);
    EXPECT_EQ(check::diff_structure(idx, oracle::naive_build(pm, 16)), "");
}

TEST(Invariants, ListSpaceIsLinear) {
    for (auto fam : {corpus::Family::line, corpus::Family::grid2d, corpus::Family::gaussian_mixture}) {
        const auto idx = Index::build(corpus::generate(fam, 1500, 9));
        EXPECT_LE(idx.lists().nontrivial_count(), 4 * idx.size()) << corpus::to_string(fam);
        EXPECT_EQ(check::net_axiom_violations(idx), 0u);
    }
}

TEST(Invariants, Determinism) {
    const auto ps = corpus::generate(corpus::Family::grid2d, 400, 5);
    const auto a = Index::build(ps), b = Index::build(ps);
    EXPECT_TRUE(std::ranges::equal(a.lists().payload(), b.lists().payload()));
    ASSERT_EQ(a.tree().size(), b.tree().size());
    for (NodeId v = 0; v < a.tree().size(); ++v) {
        EXPECT_EQ(a.tree().node(v).point, b.tree().node(v).point);
        EXPECT_EQ(a.tree().node(v).parent, b.tree().node(v).parent);
    }
}
