#include "nethier/metric.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nethier;

namespace {

PointSet line(std::vector<double> xs) { return PointSet::from_coords(1, std::move(xs)); }

} // namespace

TEST(LoadPoints, AlreadyNormalizedLine) {
    const auto ps = load_points("0\n1\n2\n4\n", InputFormat::coords);
    EXPECT_EQ(ps.size(), 4u);
    EXPECT_DOUBLE_EQ(ps.scale(), 1.0);
    EXPECT_DOUBLE_EQ(ps.pair_extrema().first, 1.0);
}

TEST(LoadPoints, RescalesToUnitMinimum) {
    const auto ps = load_points("0\n0.5\n1\n2\n", InputFormat::coords);
    EXPECT_DOUBLE_EQ(ps.scale(), 2.0);
    const std::vector<double> expect{0, 1, 2, 4};
    for (PointId p = 0; p < 4; ++p) EXPECT_DOUBLE_EQ(ps.coords(p)[0], expect[p]);
}

TEST(LoadPoints, SmallestMatrix) {
    const auto ps = load_points("2\n0 1\n1 0\n", InputFormat::matrix);
    EXPECT_EQ(ps.size(), 2u);
    EXPECT_EQ(ps.backing(), Backing::matrix);
    EXPECT_DOUBLE_EQ(ps.distance(0, 1), 1.0);
}

TEST(LoadPoints, HeaderSelectsNorm) {
    const auto ps = load_points("#dim 2 norm L1\n0 0\n1 1\n3 0\n", InputFormat::coords);
    EXPECT_EQ(ps.norm(), Norm::L1);
    EXPECT_EQ(ps.dim(), 2u);
    // raw distances 2, 3, 3 -> scale 1/2
    EXPECT_DOUBLE_EQ(ps.distance(0, 2), 1.5);
}

TEST(LoadPoints, MatrixDividesByMinimum) {
    const auto ps = load_points("3\n0 2 4\n2 0 3\n4 3 0\n", InputFormat::matrix);
    EXPECT_DOUBLE_EQ(ps.scale(), 0.5);
    EXPECT_DOUBLE_EQ(ps.distance(0, 2), 2.0);
}

TEST(LoadPoints, RejectsMalformedInput) {
    EXPECT_THROW(load_points("0 1\n2\n", InputFormat::coords), data_error);
    EXPECT_THROW(load_points("0\nabc\n", InputFormat::coords), data_error);
    EXPECT_THROW(load_points("", InputFormat::coords), data_error);
    EXPECT_THROW(load_points("0\n0\n", InputFormat::coords), data_error);
    EXPECT_THROW(load_points("2\n0 1\n2 0\n", InputFormat::matrix), data_error);
    EXPECT_THROW(load_points("2\n0 -1\n-1 0\n", InputFormat::matrix), data_error);
    EXPECT_THROW(load_points("3\n0 1 5\n1 0 1\n5 1 0\n", InputFormat::matrix), data_error);
    EXPECT_THROW(load_points("3\n0 1 1\n1 0 1\n", InputFormat::matrix), data_error);
    EXPECT_THROW(load_points("#dim 2 norm L7\n0 0\n", InputFormat::coords), data_error);
}

TEST(Distance, LineAndIdentity) {
    const auto ps = line({0, 1, 2, 4});
    EXPECT_DOUBLE_EQ(ps.distance(0, 3), 4.0);
    for (PointId a = 0; a < 4; ++a) EXPECT_EQ(ps.distance(a, a), 0.0);
    EXPECT_THROW(ps.distance(0, 4), data_error);
}

TEST(Distance, Norms) {
    const std::vector<double> xy{0, 0, 3, 4};
    EXPECT_DOUBLE_EQ(PointSet::from_coords(2, xy, Norm::L2).distance(0, 1), 1.0);
    const auto l1 = PointSet::from_coords(2, xy, Norm::L1);
    EXPECT_DOUBLE_EQ(l1.distance(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(l1.scale(), 1.0 / 7.0);
    EXPECT_DOUBLE_EQ(PointSet::from_coords(2, xy, Norm::Linf).scale(), 0.25);
}

TEST(ComputeStats, LineExamples) {
    auto s = compute_stats(line({0, 1, 2, 4}));
    EXPECT_DOUBLE_EQ(s.diameter, 4.0);
    EXPECT_DOUBLE_EQ(s.aspect_ratio, 4.0);
    EXPECT_EQ(s.i_top, 3);

    s = compute_stats(line({0, 1}));
    EXPECT_DOUBLE_EQ(s.diameter, 1.0);
    EXPECT_EQ(s.i_top, 1);

    s = compute_stats(line({0, 1, 2, 3, 4, 5, 6, 7}));
    EXPECT_DOUBLE_EQ(s.diameter, 7.0);
    EXPECT_EQ(s.i_top, 3);

    EXPECT_THROW(compute_stats(line({5})), data_error);
}

TEST(ComputeStats, MinDistInOriginalUnits) {
    const auto s = compute_stats(line({0, 0.5, 1, 2}));
    EXPECT_DOUBLE_EQ(s.min_dist, 0.5);
    EXPECT_DOUBLE_EQ(s.diameter, 4.0);
}

TEST(ComputeStats, BackingsAgree) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 50);
    std::vector<double> xy;
    for (int k = 0; k < 60; ++k) xy.push_back(u(rng));
    const auto pc = PointSet::from_coords(2, xy);
    std::vector<double> mat(30 * 30);
    for (PointId a = 0; a < 30; ++a)
        for (PointId b = 0; b < 30; ++b) mat[a * 30 + b] = pc(a, b) / pc.scale();
    const auto pm = PointSet::from_matrix(30, mat);
    const auto sc = compute_stats(pc), sm = compute_stats(pm);
    EXPECT_NEAR(sc.diameter, sm.diameter, 1e-9 * sc.diameter);
    EXPECT_EQ(sc.i_top, sm.i_top);
}

TEST(Normalization, Idempotent) {
    const auto a = line({0, 0.3, 1.1, 7.9});
    std::vector<double> xs;
    for (PointId p = 0; p < a.size(); ++p) xs.push_back(a.coords(p)[0]);
    const auto b = line(xs);
    EXPECT_NEAR(b.scale(), 1.0, 1e-9);
}

TEST(TriangleInequality, ExhaustiveOnRandomPlane) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10, 10);
    std::vector<double> xy;
    for (int k = 0; k < 80; ++k) xy.push_back(u(rng));
    for (Norm n : {Norm::L2, Norm::L1, Norm::Linf}) {
        const auto ps = PointSet::from_coords(2, xy, n);
        for (PointId a = 0; a < 40; ++a)
            for (PointId b = 0; b < 40; ++b)
                for (PointId c = 0; c < 40; ++c) ASSERT_LE(ps(a, b), ps(a, c) + ps(c, b) + 1e-9);
    }
}

TEST(Helpers, Levels) {
    EXPECT_EQ(top_level_for(4.0), 3);
    EXPECT_EQ(top_level_for(3.99), 2);
    EXPECT_EQ(top_level_for(1.0), 1);
    EXPECT_EQ(log2_inverse_ceil(0.5), 1);
    EXPECT_EQ(log2_inverse_ceil(0.3), 2);
    EXPECT_EQ(log2_inverse_ceil(0.25), 2);
    EXPECT_EQ(log2_inverse_ceil(1.0), 0);
}
