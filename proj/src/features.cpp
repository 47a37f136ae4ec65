#include "turnmix/features.hpp"

#include <cmath>
#include <limits>

#include "turnmix/csv.hpp"

namespace turnmix {

NearestDefenderFeatures nearest_defender_features(
    const Frame& carrier, std::span<const Frame> defenders) {
  if (defenders.empty()) {
    throw MissingDefenderError("no defender frames for play " +
                               std::to_string(carrier.play_id));
  }
  const Frame* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const Frame& d : defenders) {
    const double dist = std::hypot(d.x - carrier.x, d.y - carrier.y);
    if (dist < best || (dist == best && nearest && d.player_id < nearest->player_id)) {
      best = dist;
      nearest = &d;
    }
  }
  const Frame& d = *nearest;
  NearestDefenderFeatures f;
  f.speed = d.s;
  // Angle between the defender's motion and the line of sight to the carrier.
  const double sight = std::atan2(carrier.y - d.y, carrier.x - d.x);
  f.rel_motion_angle = wrap_angle(d.dir - sight);
  f.rel_x = d.x - carrier.x;
  f.rel_y_abs = std::abs(d.y - carrier.y);
  f.distance = best;
  f.x_from_endzone = kFieldLength - d.x;
  f.y_from_center = kFieldCenterY - d.y;
  return f;
}

RelativeCounts relative_count_features(const Frame& carrier,
                                       std::span<const Frame> teammates,
                                       std::span<const Frame> defenders) {
  if (teammates.size() + defenders.size() != 21) {
    throw AlignmentError("expected 21 aligned players, got " +
                         std::to_string(teammates.size() + defenders.size()));
  }
  RelativeCounts c{0, 0, 0, 0};
  for (const Frame& d : defenders) {
    if (d.x > carrier.x) ++c.defenders_in_front;
    if (d.y > carrier.y) ++c.defenders_left;
  }
  for (const Frame& t : teammates) {
    if (t.x > carrier.x) ++c.teammates_in_front;
    if (t.y > carrier.y) ++c.teammates_left;
  }
  return c;
}

std::vector<ModelFrame> build_model_frames(const CarrierSequence& sequence,
                                           const PlayMeta& meta) {
  // Degenerate-step policy: drop frames that moved less than the threshold
  // from the previously kept frame, so every bearing is well defined.
  std::vector<std::size_t> kept;
  std::vector<double> cum_dis(sequence.frames.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = 0; i < sequence.frames.size(); ++i) {
    const Frame& f = sequence.frames[i].carrier;
    running += f.dis;
    cum_dis[i] = running;
    if (kept.empty()) {
      kept.push_back(i);
      continue;
    }
    const Frame& prev = sequence.frames[kept.back()].carrier;
    if (std::hypot(f.x - prev.x, f.y - prev.y) >= kDegenerateStepYards) {
      kept.push_back(i);
    }
  }

  std::vector<ModelFrame> rows;
  if (kept.size() < 4) return rows;

  std::vector<double> bearings(kept.size() - 1);
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    const Frame& p0 = sequence.frames[kept[i]].carrier;
    const Frame& p1 = sequence.frames[kept[i + 1]].carrier;
    bearings[i] = bearing({p0.x, p0.y}, {p1.x, p1.y});
  }
  // Turn angle at kept index i uses bearings i-1 and i; a row additionally
  // needs the lagged angle, so rows start at kept index 2.
  std::vector<double> turns(kept.size());
  for (std::size_t i = 1; i + 1 < kept.size(); ++i) {
    turns[i] = wrap_angle(bearings[i] - bearings[i - 1]);
  }

  rows.reserve(kept.size() - 3);
  for (std::size_t i = 2; i + 1 < kept.size(); ++i) {
    const AlignedFrame& af = sequence.frames[kept[i]];
    const Frame& c = af.carrier;
    ModelFrame row;
    row.phi = turns[i];
    row.phi_prev = turns[i - 1];

    const RelativeCounts counts =
        relative_count_features(c, af.teammates, af.defenders);
    const NearestDefenderFeatures def =
        nearest_defender_features(c, af.defenders);

    row.x[kPrevTurnAngle] = row.phi_prev;
    row.x[kXFromEndzone] = kFieldLength - c.x;
    row.x[kYFromCenter] = kFieldCenterY - c.y;
    row.x[kXFromFirstDown] = meta.line_to_gain() - c.x;
    row.x[kDefendersInFront] = counts.defenders_in_front;
    row.x[kDefendersLeft] = counts.defenders_left;
    row.x[kTeammatesInFront] = counts.teammates_in_front;
    row.x[kTeammatesLeft] = counts.teammates_left;
    row.x[kDefSpeed] = def.speed;
    row.x[kDefRelMotionAngle] = def.rel_motion_angle;
    row.x[kDefRelX] = def.rel_x;
    row.x[kDefRelYAbs] = def.rel_y_abs;
    row.x[kDefDistance] = def.distance;
    row.x[kDefXFromEndzone] = def.x_from_endzone;
    row.x[kDefYFromCenter] = def.y_from_center;

    row.z[kSpeed] = c.s;
    row.z[kAccel] = c.a;
    row.z[kCumDistance] = cum_dis[kept[i]];
    row.z[kIsRun] = meta.type == PlayMeta::Type::Run ? 1.0 : 0.0;
    row.z[kIsTE] = sequence.position == Position::TE ? 1.0 : 0.0;
    row.z[kIsWR] = sequence.position == Position::WR ? 1.0 : 0.0;

    row.position = sequence.position;
    row.player_id = sequence.carrier_id;
    row.game_id = meta.game_id;
    row.play_id = meta.play_id;
    row.frame_id = c.frame_id;
    rows.push_back(row);
  }
  return rows;
}

const std::vector<std::string>& model_frame_columns() {
  static const std::vector<std::string> cols = {
      "game_id",           "play_id",
      "frame_id",          "player_id",
      "position",          "turn_angle",
      "prev_turn_angle",   "x_from_endzone",
      "y_from_center",     "x_from_first_down",
      "defenders_in_front", "defenders_left",
      "teammates_in_front", "teammates_left",
      "def_speed",         "def_rel_motion_angle",
      "def_rel_x",         "def_rel_y_abs",
      "def_distance",      "def_x_from_endzone",
      "def_y_from_center", "speed",
      "accel",             "cum_distance",
      "is_run",            "is_te",
      "is_wr",
  };
  return cols;
}

void write_model_frames(const std::string& path,
                        std::span<const ModelFrame> rows) {
  CsvWriter out(path);
  out.write_row(model_frame_columns());
  std::vector<std::string> fields;
  for (const ModelFrame& r : rows) {
    fields.clear();
    fields.push_back(std::to_string(r.game_id));
    fields.push_back(std::to_string(r.play_id));
    fields.push_back(std::to_string(r.frame_id));
    fields.push_back(std::to_string(r.player_id));
    fields.push_back(position_name(r.position));
    fields.push_back(format_double(r.phi));
    for (double v : r.x) fields.push_back(format_double(v));
    for (double v : r.z) fields.push_back(format_double(v));
    out.write_row(fields);
  }
}

std::vector<ModelFrame> read_model_frames(const std::string& path) {
  CsvReader reader(path);
  const auto& cols = model_frame_columns();
  std::vector<int> idx(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    idx[i] = reader.require_column(cols[i]);
  }
  std::vector<ModelFrame> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    ModelFrame r;
    int k = 0;
    auto next_int = [&]() {
      const auto v = parse_int(f[idx[k]]);
      if (!v) throw SchemaError(path + ": bad integer in column " + cols[k]);
      ++k;
      return *v;
    };
    auto next_double = [&]() {
      const auto v = parse_double(f[idx[k]]);
      if (!v) throw SchemaError(path + ": bad number in column " + cols[k]);
      ++k;
      return *v;
    };
    r.game_id = next_int();
    r.play_id = next_int();
    r.frame_id = static_cast<int>(next_int());
    r.player_id = next_int();
    r.position = position_from_string(f[idx[k]]);
    ++k;
    r.phi = next_double();
    for (auto& v : r.x) v = next_double();
    for (auto& v : r.z) v = next_double();
    r.phi_prev = r.x[kPrevTurnAngle];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace turnmix
