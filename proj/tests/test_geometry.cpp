#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "usv/geometry.hpp"
#include "usv/oracles.hpp"

using namespace usv;
using namespace usv::geometry;

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool is_ccw(const std::vector<Vec2>& h) {
  for (std::size_t k = 0; k < h.size(); ++k) {
    const Vec2& a = h[k];
    const Vec2& b = h[(k + 1) % h.size()];
    const Vec2& c = h[(k + 2) % h.size()];
    if (cross(b - a, c - b) <= 0.0) return false;
  }
  return true;
}

}  // namespace

TEST(ConvexHull, TriangleCounterClockwise) {
  const std::vector<Vec2> pts{{0, 0}, {0, 1}, {1, 0}};
  const auto h = convex_hull(pts);
  ASSERT_EQ(h.size(), 3u);
  EXPECT_TRUE(is_ccw(h));
}

TEST(ConvexHull, InteriorPointDropped) {
  const std::vector<Vec2> pts{{0, 0}, {4, 0}, {0, 4}, {1, 1}};
  const auto h = convex_hull(pts);
  ASSERT_EQ(h.size(), 3u);
  for (const auto& v : h) EXPECT_FALSE(v.isApprox(Vec2(1, 1)));
}

TEST(ConvexHull, CollinearGivesSegment) {
  const std::vector<Vec2> pts{{0, 0}, {2, 2}, {1, 1}, {3, 3}};
  const auto h = convex_hull(pts);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_TRUE((h[0] - Vec2(0, 0)).norm() < 1e-15 || (h[1] - Vec2(0, 0)).norm() < 1e-15);
  EXPECT_TRUE((h[0] - Vec2(3, 3)).norm() < 1e-15 || (h[1] - Vec2(3, 3)).norm() < 1e-15);
}

TEST(ConvexHull, CoincidentGivesPoint) {
  const std::vector<Vec2> pts{{1, 2}, {1, 2}, {1, 2}};
  EXPECT_EQ(convex_hull(pts).size(), 1u);
}

TEST(ConvexHull, MatchesBruteForceMembership) {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> c(-10, 10);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec2> pts(5);
    for (auto& p : pts) p = Vec2(c(g), c(g));
    const auto h = convex_hull(pts);
    EXPECT_TRUE(h.size() < 3 || is_ccw(h));
    // every input point is a convex combination of the hull vertices
    for (const auto& p : pts) EXPECT_LT(oracles::simplex_distance(p, h).distance, 1e-9);
    // a vertex is not a convex combination of the other inputs
    for (const auto& v : h) {
      std::vector<Vec2> rest;
      for (const auto& p : pts)
        if ((p - v).norm() > 0.0) rest.push_back(p);
      EXPECT_GT(oracles::simplex_distance(v, rest).distance, 1e-9);
    }
  }
}

TEST(HullDistance, CentroidInside) {
  const std::vector<Vec2> pts{{0, 0}, {6, 0}, {0, 3}};
  EXPECT_EQ(hull_distance(Vec2(2, 1), pts), 0.0);
}

TEST(HullDistance, SinglePoint) {
  const std::vector<Vec2> pts{{0, 0}};
  EXPECT_DOUBLE_EQ(hull_distance(Vec2(3, 4), pts), 5.0);
}

TEST(HullDistance, UnitSquare) {
  const std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_NEAR(hull_distance(Vec2(2, 0.5), pts), 1.0, 1e-12);
  EXPECT_NEAR(oracles::simplex_distance(Vec2(2, 0.5), pts).distance, 1.0, 1e-4);
}

TEST(HullDistance, SegmentHull) {
  const std::vector<Vec2> pts{{0, 0}, {4, 0}};
  EXPECT_NEAR(hull_distance(Vec2(2, 3), pts), 3.0, 1e-12);
  EXPECT_NEAR(hull_distance(Vec2(7, 4), pts), 5.0, 1e-12);
  EXPECT_EQ(hull_distance(Vec2(1, 0), pts), 0.0);
}

TEST(HullDistance, BoundaryPointIsInside) {
  const std::vector<Vec2> pts{{0, 0}, {2, 0}, {0, 2}};
  EXPECT_EQ(hull_distance(Vec2(1, 0), pts), 0.0);
  EXPECT_EQ(hull_distance(Vec2(0, 0), pts), 0.0);
}

TEST(HullDistance, AgreesWithSimplexOracle) {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> c(-10, 10), o(-6, 6);
  std::uniform_int_distribution<int> n(1, 6);
  int inside = 0;
  for (int k = 0; k < 200; ++k) {
    std::vector<Vec2> pts(static_cast<std::size_t>(n(g)));
    for (auto& p : pts) p = Vec2(c(g), c(g));
    const Vec2 xo(o(g), o(g));
    const double d = hull_distance(xo, pts);
    const auto ref = oracles::simplex_distance(xo, pts);
    ASSERT_EQ(d == 0.0, oracles::simplex_contains(xo, pts)) << "instance " << k;
    if (d > 0.0) {
      ASSERT_NEAR(d, ref.distance, 1e-3);
    }
    inside += d == 0.0;
  }
  EXPECT_GT(inside, 20);
  EXPECT_LT(inside, 180);
}

TEST(Unwrap, FirstCallReturnsRaw) { EXPECT_EQ(unwrap(std::nullopt, -3.0), -3.0); }

TEST(Unwrap, Examples) {
  EXPECT_NEAR(unwrap(3.0, -3.1), 3.1832, 1e-4);
  EXPECT_NEAR(unwrap(3.0, -3.1), -3.1 + kTwoPi, 1e-15);
  EXPECT_DOUBLE_EQ(unwrap(0.0, 0.5), 0.5);
  EXPECT_NEAR(unwrap(6.9, 0.7), 6.9832, 1e-4);
}

TEST(Unwrap, NearestRepresentative) {
  std::mt19937_64 g(4);
  std::uniform_real_distribution<double> prev(-50, 50), raw(-kPi, kPi);
  for (int k = 0; k < 1000; ++k) {
    const double p = prev(g), r = raw(g);
    const double u = unwrap(p, r);
    ASSERT_LE(std::abs(u - p), kPi + 1e-12);
    const double turns = (u - r) / kTwoPi;
    ASSERT_NEAR(turns, std::round(turns), 1e-12);
  }
}

TEST(Unwrap, TracksContinuousRotation) {
  AngleUnwrapper uw;
  for (int k = 0; k <= 400; ++k) {
    const double true_angle = 0.05 * k;
    ASSERT_NEAR(uw(wrap_to_pi(true_angle)), true_angle, 1e-9);
  }
}

TEST(WrappedDiff, Examples) {
  EXPECT_NEAR(wrapped_diff(0.1, -0.1).value(), 0.2, 1e-15);
  EXPECT_NEAR(wrapped_diff(3.0, -3.0).value(), -0.2832, 1e-4);
  EXPECT_NEAR(wrapped_diff(3.0, -3.0).value(), 6.0 - kTwoPi, 1e-15);
  EXPECT_EQ(wrapped_diff(1.3, 1.3).value(), 0.0);
}

TEST(WrappedDiff, RangeAndAntisymmetry) {
  EXPECT_EQ(wrapped_diff(kPi, 0.0).value(), -kPi);
  std::mt19937_64 g(6);
  std::uniform_real_distribution<double> a(-20, 20);
  for (int k = 0; k < 1000; ++k) {
    const double x = a(g), y = a(g);
    const double d1 = wrapped_diff(x, y).value(), d2 = wrapped_diff(y, x).value();
    ASSERT_GE(d1, -kPi);
    ASSERT_LT(d1, kPi);
    const double s = d1 + d2;
    ASSERT_TRUE(std::abs(s) < 1e-12 || std::abs(s + kTwoPi) < 1e-12) << s;
  }
}

TEST(WrappedDiff, AntisymmetryAtBoundary) {
  const double s = wrapped_diff(kPi, 0.0).value() + wrapped_diff(0.0, kPi).value();
  EXPECT_NEAR(s, -kTwoPi, 1e-15);
}
