#include "turnmix/angles.hpp"

namespace turnmix {

double wrap_angle(double radians) {
  if (!std::isfinite(radians)) {
    throw std::invalid_argument("wrap_angle: non-finite input");
  }
  double r = std::remainder(radians, kTwoPi);  // lands in [-pi, pi]
  if (r <= -kPi) {
    r = kPi;  // -pi and pi are the same direction; keep the +pi representative
  }
  return r;
}

double bearing(const Point2& p0, const Point2& p1) {
  const double dx = p1.x - p0.x;
  const double dy = p1.y - p0.y;
  if (std::hypot(dx, dy) < kDegenerateStepYards) {
    throw DegenerateStepError("bearing: displacement below degenerate-step threshold");
  }
  return std::atan2(dy, dx);
}

std::vector<double> turn_angle_series(std::span<const Point2> path) {
  if (path.size() < 3) {
    throw InsufficientPathError("turn_angle_series: need at least 3 points");
  }
  std::vector<double> bearings;
  bearings.reserve(path.size() - 1);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    bearings.push_back(bearing(path[i], path[i + 1]));
  }
  std::vector<double> turns;
  turns.reserve(bearings.size() - 1);
  for (std::size_t t = 1; t < bearings.size(); ++t) {
    turns.push_back(wrap_angle(bearings[t] - bearings[t - 1]));
  }
  return turns;
}

}  // namespace turnmix
