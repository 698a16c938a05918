#include "hyperwalk/geometry.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "hyperwalk/random.hpp"

using namespace hyperwalk;

TEST(Geometry, NormalizeAngleIdempotent) {
    Rng rng(7);
    for (int i = 0; i < 10000; ++i) {
        double theta = rng.uniform(-100.0, 100.0);
        double once = normalize_angle(theta);
        ASSERT_GE(once, 0.0);
        ASSERT_LT(once, kTwoPi);
        ASSERT_EQ(normalize_angle(once), once);
    }
    EXPECT_EQ(normalize_angle(0.0), 0.0);
    EXPECT_EQ(normalize_angle(kTwoPi), 0.0);
}

TEST(Geometry, OriginDistanceClosedForm) {
    EXPECT_EQ(origin_distance({0.0, 0.0}), 0.0);
    // 2*atanh(0.5) = ln 3, 2*atanh(0.9) = ln 19
    EXPECT_NEAR(origin_distance({0.5, 0.0}), 1.0986122886681098, 1e-14);
    EXPECT_NEAR(origin_distance({0.9, 0.0}), 2.9444389791664404, 1e-13);
    EXPECT_GT(origin_distance({0.6, 0.0}), origin_distance({0.5, 0.0}));
}

TEST(Geometry, BoundaryClamp) {
    bool clamped = false;
    double d = origin_distance({1.0, 0.0}, &clamped);
    EXPECT_TRUE(clamped);
    EXPECT_TRUE(std::isfinite(d));

    clamped = false;
    origin_distance({1.0 - 1e-12, 0.0}, &clamped);
    EXPECT_TRUE(clamped);

    clamped = true;
    origin_distance({0.5, 0.0}, &clamped);
    EXPECT_FALSE(clamped);
}

TEST(Geometry, ConversionExamples) {
    NaturalPoint n = to_natural({0.0, 1.5});
    EXPECT_EQ(n.r, 0.0);
    EXPECT_NEAR(to_natural({0.5, 0.0}).r, 1.0986122886681098, 1e-14);

    EXPECT_EQ(to_disk({0.0, 2.0}).r, 0.0);
    EXPECT_NEAR(to_disk({1.0986122886681098, 0.0}).r, 0.5, 1e-15);
}

TEST(Geometry, DiskRoundtrip) {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        DiskPoint p{rng.uniform() * (1.0 - 1e-6), rng.uniform(0.0, kTwoPi)};
        DiskPoint back = to_disk(to_natural(p));
        ASSERT_NEAR(back.r, p.r, 1e-12);
        ASSERT_NEAR(back.theta, p.theta, 1e-12);
    }
}

// Natural-side bijection. Representing the disk radius as a double limits
// reachable accuracy near the boundary: beyond r ~ 21 the gap 1 - tanh(r/2)
// falls under the resolution of doubles near 1 and the roundtrip error grows
// like ulp / gap, so the tight check stops at 20.
TEST(Geometry, NaturalRoundtrip) {
    Rng rng(12);
    for (int i = 0; i < 10000; ++i) {
        NaturalPoint p{rng.uniform() * 20.0, rng.uniform(0.0, kTwoPi)};
        NaturalPoint back = to_natural(to_disk(p));
        ASSERT_NEAR(back.r, p.r, 1e-9 * std::max(1.0, p.r));
        ASSERT_NEAR(back.theta, p.theta, 1e-12);
    }
    for (int i = 0; i < 1000; ++i) {
        NaturalPoint p{20.0 + rng.uniform() * 10.0, rng.uniform(0.0, kTwoPi)};
        NaturalPoint back = to_natural(to_disk(p));
        ASSERT_NEAR(back.r, p.r, 1e-3 * p.r);
    }
}

TEST(Geometry, InnerProductExamples) {
    // <x, x> = r^2
    EXPECT_EQ(inner(NaturalPoint{2.0, 1.0}, NaturalPoint{2.0, 1.0}), 4.0);
    // orthogonal angles
    EXPECT_NEAR(inner(NaturalPoint{3.0, 0.0}, NaturalPoint{5.0, kTwoPi / 4.0}), 0.0, 1e-12);
    // disk form: 4 * atanh(0.5)^2
    EXPECT_NEAR(inner(DiskPoint{0.5, 0.0}, DiskPoint{0.5, 0.0}), 1.2069489608125820, 1e-13);
}

TEST(Geometry, InnerProductSymmetry) {
    Rng rng(13);
    for (int i = 0; i < 10000; ++i) {
        NaturalPoint x{rng.uniform(0.01, 10.0), rng.uniform(0.0, kTwoPi)};
        NaturalPoint y{rng.uniform(0.01, 10.0), rng.uniform(0.0, kTwoPi)};
        ASSERT_EQ(inner(x, y), inner(y, x));
        ASSERT_GE(inner(x, x), 0.0);
        ASSERT_NEAR(inner(x, x), x.r * x.r, 1e-12 * x.r * x.r);
    }
}

TEST(Geometry, InnerProductRotationInvariance) {
    Rng rng(14);
    for (int i = 0; i < 10000; ++i) {
        NaturalPoint x{rng.uniform(0.01, 5.0), rng.uniform(0.0, kTwoPi)};
        NaturalPoint y{rng.uniform(0.01, 5.0), rng.uniform(0.0, kTwoPi)};
        double shift = rng.uniform(-20.0, 20.0);
        NaturalPoint xs{x.r, normalize_angle(x.theta + shift)};
        NaturalPoint ys{y.r, normalize_angle(y.theta + shift)};
        ASSERT_NEAR(inner(x, y), inner(xs, ys), 1e-12 * std::max(1.0, x.r * y.r));
    }
}

// Matches the disk-form evaluation route 4*atanh(r_x)*atanh(r_y)*cos(dtheta).
TEST(Geometry, InnerProductTwoRoutes) {
    Rng rng(15);
    for (int i = 0; i < 1000; ++i) {
        DiskPoint x{rng.uniform() * 0.99, rng.uniform(0.0, kTwoPi)};
        DiskPoint y{rng.uniform() * 0.99, rng.uniform(0.0, kTwoPi)};
        double direct = 4.0 * std::atanh(x.r) * std::atanh(y.r) * std::cos(x.theta - y.theta);
        ASSERT_NEAR(inner(x, y), direct, 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST(Geometry, Circumference) {
    EXPECT_EQ(circumference(0.0), 0.0);
    EXPECT_NEAR(circumference(1.0), 7.384006872882645, 1e-12);
    // hyperbolic circles outgrow Euclidean ones: C(R) / (2 pi R) at R = 5
    EXPECT_NEAR(circumference(5.0) / (kTwoPi * 5.0), 14.840642115557752, 1e-11);
    EXPECT_GT(circumference(10.0) / (kTwoPi * 10.0), circumference(5.0) / (kTwoPi * 5.0));
}

TEST(Geometry, CartesianExport) {
    Cartesian2 origin = cartesian(to_disk({0.0, 0.37}));
    EXPECT_EQ(origin.x, 0.0);
    EXPECT_EQ(origin.y, 0.0);
    Cartesian2 half = cartesian(to_disk({1.0986122886681098, 0.0}));
    EXPECT_NEAR(half.x, 0.5, 1e-15);
    EXPECT_NEAR(half.y, 0.0, 1e-15);
}
