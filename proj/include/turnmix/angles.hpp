#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace turnmix {

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr double kTwoPi = 2.0 * kPi;

// Displacements shorter than this are treated as no movement; atan2 on them
// would be numerically meaningless.
inline constexpr double kDegenerateStepYards = 1e-6;

struct DegenerateStepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InsufficientPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field coordinates in yards: x runs goal line to goal line, y sideline to
// sideline.
struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Canonical representative of any real angle in (-pi, pi].
double wrap_angle(double radians);

/// Direction of travel from p0 to p1. Throws DegenerateStepError when the
/// displacement is shorter than kDegenerateStepYards.
double bearing(const Point2& p0, const Point2& p1);

/// Turn angles along a path of T+1 points: element t-1 is the wrapped change
/// in bearing between steps [t-1,t] and [t,t+1]. Output length is T-1.
std::vector<double> turn_angle_series(std::span<const Point2> path);

}  // namespace turnmix
