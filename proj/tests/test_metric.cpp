#include <gtest/gtest.h>

#include <cmath>
#include <variant>

#include "test_support.hpp"
#include "wnn/dataset.hpp"
#include "wnn/harness.hpp"
#include "wnn/metric.hpp"
#include "wnn/random.hpp"

using namespace wnn;

TEST(Distance, Examples) {
    const Point a{0, 0}, b{3, 4}, c{1, 1};
    EXPECT_DOUBLE_EQ(distance(a, b, MetricKind::euclidean), 5.0);
    EXPECT_DOUBLE_EQ(distance(a, b, MetricKind::manhattan), 7.0);
    EXPECT_DOUBLE_EQ(distance(a, b, MetricKind::chebyshev), 4.0);
    for (auto m : {MetricKind::euclidean, MetricKind::manhattan, MetricKind::chebyshev}) {
        EXPECT_EQ(distance(c, c, m), 0.0);
    }
}

TEST(Distance, DimensionMismatchThrows) {
    EXPECT_THROW(distance(Point{0, 0}, Point{1, 2, 3}), Error);
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
    Rng rng(42);
    for (auto m : {MetricKind::euclidean, MetricKind::manhattan, MetricKind::chebyshev}) {
        for (int trial = 0; trial < 10000; ++trial) {
            Point a(3), b(3), c(3);
            for (int d = 0; d < 3; ++d) {
                a[d] = rng.uniform(-5, 5);
                b[d] = rng.uniform(-5, 5);
                c[d] = rng.uniform(-5, 5);
            }
            const double ab = distance(a, b, m), ba = distance(b, a, m);
            const double bc = distance(b, c, m), ac = distance(a, c, m);
            ASSERT_GE(ab, 0.0);
            ASSERT_NEAR(ab, ba, 1e-12);
            ASSERT_LE(ac, ab + bc + 1e-12);
            ASSERT_EQ(distance(a, a, m), 0.0);
            ASSERT_GT(ab, 0.0); // distinct random points
        }
    }
}

TEST(WeightedDistance, Examples) {
    EXPECT_DOUBLE_EQ(weighted_distance(Point{0, 0}, Point{3, 4}, 1, 2), 2.5);
    // 10 / (2 * 2)
    EXPECT_DOUBLE_EQ(weighted_distance(Point{0, 0}, Point{6, 8}, 2, 2), 10.0 / (2.0 * 2.0));
}

TEST(WeightedDistance, UnitWeightsReduceToDistance) {
    Rng rng(7);
    for (int trial = 0; trial < 1000; ++trial) {
        Point a{rng.uniform(), rng.uniform()}, b{rng.uniform(), rng.uniform()};
        ASSERT_EQ(weighted_distance(a, b, 1, 1), distance(a, b));
    }
}

TEST(WeightedDistance, CommonScalingDividesBySquare) {
    Rng rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
        Point a{rng.uniform(), rng.uniform()}, b{rng.uniform(), rng.uniform()};
        const double wa = rng.uniform(0.1, 3), wb = rng.uniform(0.1, 3), c = rng.uniform(0.1, 10);
        const double base = weighted_distance(a, b, wa, wb);
        const double scaled = weighted_distance(a, b, c * wa, c * wb);
        ASSERT_NEAR(scaled, base / (c * c), 4 * std::numeric_limits<double>::epsilon() * base / (c * c));
    }
}

TEST(WeightedDistance, RejectsNonPositiveWeights) {
    EXPECT_THROW(weighted_distance(Point{0}, Point{1}, 0, 1), Error);
    EXPECT_THROW(weighted_distance(Point{0}, Point{1}, 1, -2), Error);
}

TEST(WeightedDistance, InfiniteWeightGivesZero) {
    EXPECT_EQ(weighted_distance(Point{0}, Point{5}, infinite_weight, 1), 0.0);
    EXPECT_EQ(weighted_distance(Point{0}, Point{0}, 1, infinite_weight), 0.0);
}

TEST(NearestEnemy, TwoLinesAllOne) {
    auto ds = gen_two_lines(4);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto d = nearest_enemy_distance(ds, i);
        ASSERT_TRUE(d.has_value());
        EXPECT_DOUBLE_EQ(*d, 1.0);
    }
}

TEST(NearestEnemy, SingleClassHasNone) {
    Dataset ds({{{0, 0}, 1}, {{1, 0}, 1}, {{2, 0}, 1}});
    for (std::size_t i = 0; i < ds.size(); ++i) {
        EXPECT_FALSE(nearest_enemy_distance(ds, i).has_value());
    }
    auto radii = enemy_radii(ds);
    for (double r : radii) EXPECT_TRUE(std::isinf(r));
}

TEST(NearestEnemy, TwoPoints) {
    Dataset ds({{{0, 0}, 0}, {{3, 4}, 1}});
    EXPECT_DOUBLE_EQ(*nearest_enemy_distance(ds, 0), 5.0);
    EXPECT_EQ(nearest_enemy(ds, 0)->index, 1u);
}

TEST(NearestEnemy, TiesGoToLowestIndex) {
    Dataset ds({{{0, 0}, 0}, {{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}});
    EXPECT_EQ(nearest_enemy(ds, 0)->index, 1u);
}

TEST(DatasetInvariants, Rejections) {
    EXPECT_THROW(Dataset(std::vector<LabeledPoint>{}), Error);
    EXPECT_THROW(Dataset({{{0, 0}, 0}, {{0, 0}, 1}}), Error);
    EXPECT_THROW(Dataset({{{0, NAN}, 0}}), Error);
    EXPECT_THROW(Dataset({{{0, 1}, 0}, {{0, 1, 2}, 1}}), Error);
    EXPECT_THROW(Dataset({{{0, 1}, -1}}), Error);
    try {
        Dataset({{{0, 0}, 0}, {{1, 1}, 0}, {{0, 0}, 1}});
        FAIL() << "expected a data error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::data);
    }
    // Same-label duplicates are allowed.
    EXPECT_NO_THROW(Dataset({{{0, 0}, 0}, {{0, 0}, 0}, {{1, 0}, 1}}));
}

namespace {

void expect_on_boundary(const Boundary& b, const Point& p1, double w1, const Point& p2, double w2, int samples) {
    const auto& circle = std::get<Circle>(b);
    for (int k = 0; k < samples; ++k) {
        const double theta = 2 * std::numbers::pi * k / samples;
        Point x{circle.center[0] + circle.radius * std::cos(theta), circle.center[1] + circle.radius * std::sin(theta)};
        const double lhs = test::euclid(x, p1) / w1;
        const double rhs = test::euclid(x, p2) / w2;
        ASSERT_LT(std::abs(lhs - rhs), 1e-9) << "theta=" << theta;
    }
}

}

TEST(DecisionBoundary, ApolloniusCircleExample) {
    const Point p1{0, 0}, p2{3, 0};
    auto b = decision_boundary(p1, 2, p2, 1);
    ASSERT_TRUE(std::holds_alternative<Circle>(b));
    const auto& c = std::get<Circle>(b);
    EXPECT_NEAR(c.center[0], 4.0, 1e-12);
    EXPECT_NEAR(c.center[1], 0.0, 1e-12);
    EXPECT_NEAR(c.radius, 2.0, 1e-12);
    // Diameter endpoints (2,0) and (6,0), plus six more points on the circle.
    expect_on_boundary(b, p1, 2, p2, 1, 8);
}

TEST(DecisionBoundary, EqualWeightsGiveBisector) {
    auto b = decision_boundary(Point{0, 0}, 1, Point{2, 0}, 1);
    ASSERT_TRUE(std::holds_alternative<Line>(b));
    const auto& l = std::get<Line>(b);
    // normal . (x, y) = offset  ->  x = offset / normal_x
    EXPECT_EQ(l.normal[1], 0.0);
    EXPECT_DOUBLE_EQ(l.offset / l.normal[0], 1.0);
}

TEST(DecisionBoundary, RandomCirclesAreSelfConsistentAndSymmetric) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Point p1{rng.uniform(-3, 3), rng.uniform(-3, 3)}, p2{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        double w1 = rng.uniform(0.2, 3), w2 = rng.uniform(0.2, 3);
        if (std::abs(w1 - w2) < 0.05) w2 += 0.5;
        auto b = decision_boundary(p1, w1, p2, w2);
        expect_on_boundary(b, p1, w1, p2, w2, 16);
        auto swapped = std::get<Circle>(decision_boundary(p2, w2, p1, w1));
        const auto& c = std::get<Circle>(b);
        EXPECT_NEAR(c.center[0], swapped.center[0], 1e-9);
        EXPECT_NEAR(c.center[1], swapped.center[1], 1e-9);
        EXPECT_NEAR(c.radius, swapped.radius, 1e-9);
    }
}

TEST(DecisionBoundary, Errors) {
    EXPECT_THROW(decision_boundary(Point{1, 1}, 1, Point{1, 1}, 2), Error);
    EXPECT_THROW(decision_boundary(Point{1, 1, 1}, 1, Point{1, 2, 1}, 2), Error);
    EXPECT_THROW(decision_boundary(Point{1, 1}, 0, Point{1, 2}, 2), Error);
}

TEST(MetricNames, RoundTrip) {
    for (auto m : {MetricKind::euclidean, MetricKind::manhattan, MetricKind::chebyshev}) {
        EXPECT_EQ(parse_metric(to_string(m)), m);
    }
    EXPECT_FALSE(parse_metric("cosine").has_value());
}
