#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "turnmix/angles.hpp"

namespace turnmix {

enum class Position { RB, TE, WR, Other };

std::string position_name(Position p);
Position position_from_string(const std::string& s);

// One player's tracked state at one frame. Angles are radians in standard
// math convention (counterclockwise from +x); the raw data's
// degrees-clockwise-from-+y fields are converted once at load.
struct Frame {
  long long game_id = 0;
  long long play_id = 0;
  long long player_id = 0;
  int frame_id = 0;
  double x = 0.0;
  double y = 0.0;
  double s = 0.0;
  double a = 0.0;
  double dis = 0.0;
  double o = 0.0;
  double dir = 0.0;
  std::string event;
  std::string club;
  bool clamped = false;
};

struct PlayMeta {
  long long game_id = 0;
  long long play_id = 0;
  std::string possession_team;
  double absolute_yardline = 0.0;  // ball x in tracking coordinates
  double yards_to_go = 0.0;
  char play_direction = '?';  // 'L' or 'R', taken from the tracking rows
  bool nullified_by_penalty = false;
  std::optional<long long> ball_carrier_id;  // when the plays table carries it

  enum class Type { Unknown, Run, Pass };
  Type type = Type::Unknown;

  // First-down line x after standardization (offense attacks x = 120).
  double line_to_gain() const { return absolute_yardline + yards_to_go; }
};

struct PlayerInfo {
  long long player_id = 0;
  std::string display_name;
  std::string position_code;
  Position group = Position::Other;
};

// The carrier's frame plus every other player on the field at that frame,
// split by team.
struct AlignedFrame {
  Frame carrier;
  std::vector<Frame> teammates;  // carrier excluded
  std::vector<Frame> defenders;
};

struct CarrierSequence {
  PlayMeta meta;
  long long carrier_id = 0;
  Position position = Position::Other;
  std::string start_event;
  std::string end_event;
  std::vector<AlignedFrame> frames;  // contiguous, start event through end event
};

struct IngestReport {
  long long tracking_rows = 0;
  long long ball_rows_skipped = 0;
  long long frames_loaded = 0;
  long long rows_missing_coordinates = 0;
  long long row_errors = 0;
  long long coordinates_clamped = 0;
  long long plays_seen = 0;
  long long plays_nullified_by_penalty = 0;  // surfaced only; plays are kept
  long long sequences_extracted = 0;
  std::map<std::string, long long> plays_excluded;  // reason -> count
  std::vector<std::string> row_error_samples;
  std::vector<std::string> warnings;

  void add_row_error(const std::string& msg);
  std::string to_text() const;
  void write(const std::string& path) const;
};

using PlayKey = std::pair<long long, long long>;  // (game_id, play_id)

struct RawDataset {
  // (game, play) -> player -> frames sorted by frame_id
  std::map<PlayKey, std::map<long long, std::vector<Frame>>> tracking;
  std::map<PlayKey, PlayMeta> plays;
  std::map<long long, PlayerInfo> players;
  // From the player-play table: who rushed / who caught on each play.
  std::map<PlayKey, long long> rush_player;
  std::map<PlayKey, long long> catch_player;
  IngestReport report;
  bool standardized = false;
};

struct DatasetPaths {
  std::vector<std::string> tracking;
  std::string plays;
  std::string players;
  std::string player_play;
};

// Event vocabulary: first matching start, then first matching end after it.
bool is_run_start_event(const std::string& event);
bool is_pass_start_event(const std::string& event);
bool is_end_event(const std::string& event);

/// Parse the Big Data Bowl-schema CSVs into typed tables. Degree-valued
/// angles are converted to radians, ball rows are skipped, rows with missing
/// coordinates are dropped and counted.
RawDataset load_dataset(const DatasetPaths& paths);

/// Flip leftward plays so every offense attacks the end zone at x = 120:
/// x' = 120 - x, y' = 53.3 - y, motion angles rotated by pi and re-wrapped.
void standardize_play_direction(RawDataset& dataset);

// The transform applied to a single leftward-play frame (exposed for tests;
// it is an involution).
void flip_frame(Frame& f);

/// One sequence per qualifying play: carrier frames from the start event
/// (handoff / catch) through the end event, with the other 21 players
/// aligned per frame. Non-qualifying plays are excluded with a reason code
/// in the report.
std::vector<CarrierSequence> extract_carrier_sequences(RawDataset& dataset);

inline constexpr double kFieldLength = 120.0;
inline constexpr double kFieldWidth = 53.3;
inline constexpr double kFieldCenterY = kFieldWidth / 2.0;  // 26.65
inline constexpr double kFieldSlack = 1.0;
inline constexpr int kMinSequenceFrames = 4;

/// Raw data angle convention (degrees clockwise from +y) to standard radians.
double tracking_angle_to_radians(double degrees);

}  // namespace turnmix
