#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "turnmix/tracking.hpp"

namespace turnmix {

struct MissingDefenderError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AlignmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMeanCovariates = 15;
inline constexpr int kConcCovariates = 6;

// Mean-model covariate slots, in the fixed export order.
enum MeanCovariate {
  kPrevTurnAngle = 0,
  kXFromEndzone,
  kYFromCenter,
  kXFromFirstDown,
  kDefendersInFront,
  kDefendersLeft,
  kTeammatesInFront,
  kTeammatesLeft,
  kDefSpeed,
  kDefRelMotionAngle,
  kDefRelX,
  kDefRelYAbs,
  kDefDistance,
  kDefXFromEndzone,
  kDefYFromCenter,
};

// Concentration-model covariate slots.
enum ConcCovariate {
  kSpeed = 0,
  kAccel,
  kCumDistance,
  kIsRun,
  kIsTE,
  kIsWR,
};

// One modeling row: response, covariate vectors, grouping.
struct ModelFrame {
  double phi = 0.0;       // turn angle response
  double phi_prev = 0.0;  // lagged turn angle (also x[kPrevTurnAngle])
  std::array<double, kMeanCovariates> x{};
  std::array<double, kConcCovariates> z{};
  int player_index = -1;  // assigned when a dataset is assembled
  Position position = Position::Other;
  long long player_id = 0;
  long long game_id = 0;
  long long play_id = 0;
  int frame_id = 0;
};

struct NearestDefenderFeatures {
  double speed;
  double rel_motion_angle;  // wrap(defender dir - bearing from defender to carrier)
  double rel_x;             // defender x - carrier x
  double rel_y_abs;
  double distance;
  double x_from_endzone;  // 120 - defender x
  double y_from_center;   // 26.65 - defender y
};

struct RelativeCounts {
  int defenders_in_front;
  int defenders_left;
  int teammates_in_front;
  int teammates_left;
};

/// Features of the defender nearest the carrier (Euclidean distance, ties
/// broken by lowest player id). Throws MissingDefenderError on an empty list.
NearestDefenderFeatures nearest_defender_features(
    const Frame& carrier, std::span<const Frame> defenders);

/// Half-plane counts: in front means x strictly greater than the carrier's,
/// to the left means y strictly greater. Requires all 21 other players.
RelativeCounts relative_count_features(const Frame& carrier,
                                       std::span<const Frame> teammates,
                                       std::span<const Frame> defenders);

/// One modeling row per frame where the turn angle and its lag both exist.
/// Degenerate steps (displacement below threshold) are dropped from the
/// carrier path before differencing.
std::vector<ModelFrame> build_model_frames(const CarrierSequence& sequence,
                                           const PlayMeta& meta);

// Fixed column order of the model-frame CSV.
const std::vector<std::string>& model_frame_columns();
void write_model_frames(const std::string& path,
                        std::span<const ModelFrame> rows);
std::vector<ModelFrame> read_model_frames(const std::string& path);

}  // namespace turnmix
