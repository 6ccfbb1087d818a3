#pragma once

#include <optional>
#include <span>
#include <vector>

#include "usv/types.hpp"

namespace usv::geometry {

/// Counterclockwise hull vertices (Andrew's monotone chain). Collinear input
/// collapses to its two extreme points, coincident input to a single point.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);

/// Euclidean distance from `x_o` to the convex hull of `points`; exactly 0
/// when `x_o` lies inside or on the hull.
double hull_distance(const Vec2& x_o, std::span<const Vec2> points);

/// Distance from `p` to the closed segment [a, b].
double segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Reduces an angle into [-pi, pi).
double wrap_to_pi(double angle);

/// Angle difference reduced into [-pi, pi).
class WrappedAngleDiff {
 public:
  explicit WrappedAngleDiff(double raw) : value_(wrap_to_pi(raw)) {}
  double value() const { return value_; }

 private:
  double value_;
};

WrappedAngleDiff wrapped_diff(double a, double b);

/// Representative of `raw` (mod 2pi) nearest to `prev`. Without a previous
/// value the raw angle is returned unchanged (revolution count starts at 0).
double unwrap(std::optional<double> prev, double raw);

/// Stateful form of unwrap() for a single continuous angle signal.
class AngleUnwrapper {
 public:
  double operator()(double raw) {
    last_ = unwrap(last_, raw);
    return *last_;
  }
  std::optional<double> last() const { return last_; }

 private:
  std::optional<double> last_;
};

}  // namespace usv::geometry
