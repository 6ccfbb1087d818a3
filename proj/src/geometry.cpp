#include "usv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace usv::geometry {

namespace {

constexpr double kOrientationTol = 1e-12;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;

  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= kOrientationTol) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= kOrientationTol) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  // All collinear: the chain degenerates to the two extremes.
  if (hull.size() < 3) return {pts.front(), pts.back()};
  return hull;
}

double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

double hull_distance(const Vec2& x_o, std::span<const Vec2> points) {
  const auto hull = convex_hull(points);
  if (hull.empty()) return std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return (x_o - hull.front()).norm();
  if (hull.size() == 2) return segment_distance(x_o, hull[0], hull[1]);

  bool inside = true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Vec2& a = hull[i];
    const Vec2& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, x_o) < 0.0) inside = false;
    best = std::min(best, segment_distance(x_o, a, b));
  }
  return inside ? 0.0 : best;
}

double wrap_to_pi(double angle) {
  double r = std::fmod(angle + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  return r >= kPi ? -kPi : r;
}

WrappedAngleDiff wrapped_diff(double a, double b) { return WrappedAngleDiff(a - b); }

double unwrap(std::optional<double> prev, double raw) {
  if (!prev) return raw;
  return *prev + wrap_to_pi(raw - *prev);
}

}  // namespace usv::geometry
