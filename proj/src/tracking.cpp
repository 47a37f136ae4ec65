#include "turnmix/tracking.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "turnmix/csv.hpp"

namespace turnmix {

namespace {

constexpr std::size_t kMaxRowErrorSamples = 20;

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "NULL"; }

struct TrackingColumns {
  int game_id, play_id, nfl_id, frame_id, club, play_direction;
  int x, y, s, a, dis, o, dir, event;
};

TrackingColumns resolve_tracking_columns(const CsvReader& r) {
  return TrackingColumns{
      r.require_column("gameId"),  r.require_column("playId"),
      r.require_column("nflId"),   r.require_column("frameId"),
      r.require_column("club"),    r.require_column("playDirection"),
      r.require_column("x"),       r.require_column("y"),
      r.require_column("s"),       r.require_column("a"),
      r.require_column("dis"),     r.require_column("o"),
      r.require_column("dir"),     r.require_column("event"),
  };
}

}  // namespace

std::string position_name(Position p) {
  switch (p) {
    case Position::RB: return "RB";
    case Position::TE: return "TE";
    case Position::WR: return "WR";
    default: return "OTHER";
  }
}

Position position_from_string(const std::string& s) {
  if (s == "RB") return Position::RB;
  if (s == "TE") return Position::TE;
  if (s == "WR") return Position::WR;
  return Position::Other;
}

bool is_run_start_event(const std::string& event) { return event == "handoff"; }

bool is_pass_start_event(const std::string& event) {
  return event == "pass_outcome_caught";
}

bool is_end_event(const std::string& event) {
  return event == "tackle" || event == "out_of_bounds" ||
         event == "touchdown" || event == "fumble";
}

double tracking_angle_to_radians(double degrees) {
  return wrap_angle(kPi / 2.0 - degrees * kPi / 180.0);
}

void IngestReport::add_row_error(const std::string& msg) {
  ++row_errors;
  if (row_error_samples.size() < kMaxRowErrorSamples) {
    row_error_samples.push_back(msg);
  }
}

std::string IngestReport::to_text() const {
  std::ostringstream out;
  out << "[tracking]\n";
  out << "rows_seen = " << tracking_rows << "\n";
  out << "ball_rows_skipped = " << ball_rows_skipped << "\n";
  out << "frames_loaded = " << frames_loaded << "\n";
  out << "rows_missing_coordinates = " << rows_missing_coordinates << "\n";
  out << "row_errors = " << row_errors << "\n";
  out << "coordinates_clamped = " << coordinates_clamped << "\n";
  out << "[plays]\n";
  out << "plays_seen = " << plays_seen << "\n";
  out << "plays_nullified_by_penalty = " << plays_nullified_by_penalty << "\n";
  out << "sequences_extracted = " << sequences_extracted << "\n";
  for (const auto& [reason, count] : plays_excluded) {
    out << "excluded." << reason << " = " << count << "\n";
  }
  if (!row_error_samples.empty()) {
    out << "[row_error_samples]\n";
    for (const auto& msg : row_error_samples) out << msg << "\n";
  }
  if (!warnings.empty()) {
    out << "[warnings]\n";
    for (const auto& msg : warnings) out << msg << "\n";
  }
  return out.str();
}

void IngestReport::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ingest report: " + path);
  out << to_text();
}

RawDataset load_dataset(const DatasetPaths& paths) {
  RawDataset ds;
  std::vector<std::string> row;

  for (const auto& path : paths.tracking) {
    CsvReader reader(path);
    const TrackingColumns col = resolve_tracking_columns(reader);
    long long rows_in_file = 0;
    while (reader.next(row)) {
      ++ds.report.tracking_rows;
      ++rows_in_file;
      const std::string& nfl_id_raw = row[col.nfl_id];
      if (is_missing(nfl_id_raw) || row[col.club] == "football") {
        ++ds.report.ball_rows_skipped;
        continue;
      }
      Frame f;
      const auto game_id = parse_int(row[col.game_id]);
      const auto play_id = parse_int(row[col.play_id]);
      const auto player_id = parse_int(nfl_id_raw);
      const auto frame_id = parse_int(row[col.frame_id]);
      if (!game_id || !play_id || !player_id || !frame_id) {
        ds.report.add_row_error(path + ":" + std::to_string(reader.line()) +
                                ": unparseable identifier");
        continue;
      }
      if (is_missing(row[col.x]) || is_missing(row[col.y])) {
        ++ds.report.rows_missing_coordinates;
        continue;
      }
      const auto x = parse_double(row[col.x]);
      const auto y = parse_double(row[col.y]);
      const auto s = parse_double(row[col.s]);
      const auto a = parse_double(row[col.a]);
      const auto dis = parse_double(row[col.dis]);
      const auto o = parse_double(row[col.o]);
      const auto dir = parse_double(row[col.dir]);
      if (!x || !y || !s || !a || !dis || !o || !dir) {
        ds.report.add_row_error(path + ":" + std::to_string(reader.line()) +
                                ": unparseable numeric cell");
        continue;
      }
      if (*x < -kFieldSlack || *x > kFieldLength + kFieldSlack ||
          *y < -kFieldSlack || *y > kFieldWidth + kFieldSlack) {
        ds.report.add_row_error(path + ":" + std::to_string(reader.line()) +
                                ": coordinates beyond field slack");
        continue;
      }
      f.game_id = *game_id;
      f.play_id = *play_id;
      f.player_id = *player_id;
      f.frame_id = static_cast<int>(*frame_id);
      f.x = *x;
      f.y = *y;
      if (f.x < 0.0 || f.x > kFieldLength || f.y < 0.0 || f.y > kFieldWidth) {
        f.x = std::clamp(f.x, 0.0, kFieldLength);
        f.y = std::clamp(f.y, 0.0, kFieldWidth);
        f.clamped = true;
        ++ds.report.coordinates_clamped;
      }
      f.s = *s;
      f.a = *a;
      f.dis = *dis;
      f.o = tracking_angle_to_radians(*o);
      f.dir = tracking_angle_to_radians(*dir);
      f.event = is_missing(row[col.event]) ? "" : row[col.event];
      f.club = row[col.club];

      const PlayKey key{f.game_id, f.play_id};
      auto& play = ds.plays[key];
      if (play.play_direction == '?') {
        play.game_id = f.game_id;
        play.play_id = f.play_id;
        const std::string& d = row[col.play_direction];
        play.play_direction = (d == "left") ? 'L' : (d == "right") ? 'R' : '?';
      }
      ds.tracking[key][f.player_id].push_back(f);
      ++ds.report.frames_loaded;
    }
    if (rows_in_file == 0) {
      ds.report.warnings.push_back(path + ": no data rows");
    }
  }

  {
    CsvReader reader(paths.plays);
    const int c_game = reader.require_column("gameId");
    const int c_play = reader.require_column("playId");
    const int c_team = reader.require_column("possessionTeam");
    const int c_ytg = reader.require_column("yardsToGo");
    const int c_ayl = reader.require_column("absoluteYardlineNumber");
    const auto c_carrier = reader.find_column("ballCarrierId");
    const auto c_penalty = reader.find_column("playNullifiedByPenalty");
    while (reader.next(row)) {
      const auto game_id = parse_int(row[c_game]);
      const auto play_id = parse_int(row[c_play]);
      if (!game_id || !play_id) {
        ds.report.add_row_error(paths.plays + ":" + std::to_string(reader.line()) +
                                ": unparseable play identifier");
        continue;
      }
      const PlayKey key{*game_id, *play_id};
      auto& play = ds.plays[key];
      play.game_id = *game_id;
      play.play_id = *play_id;
      play.possession_team = row[c_team];
      play.yards_to_go = parse_double(row[c_ytg]).value_or(0.0);
      play.absolute_yardline = parse_double(row[c_ayl]).value_or(0.0);
      if (c_carrier) {
        if (auto id = parse_int(row[*c_carrier])) play.ball_carrier_id = *id;
      }
      if (c_penalty && row[*c_penalty] == "Y") {
        play.nullified_by_penalty = true;
        ++ds.report.plays_nullified_by_penalty;
      }
    }
  }

  {
    CsvReader reader(paths.players);
    const int c_id = reader.require_column("nflId");
    const int c_pos = reader.require_column("position");
    const auto c_name = reader.find_column("displayName");
    while (reader.next(row)) {
      const auto id = parse_int(row[c_id]);
      if (!id) continue;
      PlayerInfo info;
      info.player_id = *id;
      info.position_code = row[c_pos];
      info.group = position_from_string(info.position_code);
      if (c_name) info.display_name = row[*c_name];
      ds.players[*id] = info;
    }
  }

  if (!paths.player_play.empty()) {
    CsvReader reader(paths.player_play);
    const int c_game = reader.require_column("gameId");
    const int c_play = reader.require_column("playId");
    const int c_id = reader.require_column("nflId");
    const int c_rush = reader.require_column("hadRushAttempt");
    const int c_catch = reader.require_column("hadPassReception");
    while (reader.next(row)) {
      const auto game_id = parse_int(row[c_game]);
      const auto play_id = parse_int(row[c_play]);
      const auto id = parse_int(row[c_id]);
      if (!game_id || !play_id || !id) continue;
      const PlayKey key{*game_id, *play_id};
      if (row[c_rush] == "1") ds.rush_player.emplace(key, *id);
      if (row[c_catch] == "1") ds.catch_player.emplace(key, *id);
    }
  }

  // Sort frames per player; real data arrives ordered but do not rely on it.
  for (auto& [key, by_player] : ds.tracking) {
    for (auto& [pid, frames] : by_player) {
      std::sort(frames.begin(), frames.end(),
                [](const Frame& a, const Frame& b) { return a.frame_id < b.frame_id; });
    }
  }
  ds.report.plays_seen = static_cast<long long>(ds.tracking.size());
  return ds;
}

void flip_frame(Frame& f) {
  f.x = kFieldLength - f.x;
  f.y = kFieldWidth - f.y;
  f.o = wrap_angle(f.o + kPi);
  f.dir = wrap_angle(f.dir + kPi);
}

void standardize_play_direction(RawDataset& dataset) {
  if (dataset.standardized) return;
  std::vector<PlayKey> missing_direction;
  for (auto& [key, by_player] : dataset.tracking) {
    auto play_it = dataset.plays.find(key);
    const char direction =
        play_it != dataset.plays.end() ? play_it->second.play_direction : '?';
    if (direction == '?') {
      missing_direction.push_back(key);
      continue;
    }
    if (direction == 'R') continue;
    for (auto& [pid, frames] : by_player) {
      for (auto& f : frames) flip_frame(f);
    }
    play_it->second.absolute_yardline =
        kFieldLength - play_it->second.absolute_yardline;
  }
  for (const auto& key : missing_direction) {
    dataset.tracking.erase(key);
    dataset.plays.erase(key);
    ++dataset.report.plays_excluded["missing_direction"];
  }
  dataset.standardized = true;
}

namespace {

struct CarrierChoice {
  long long carrier_id = 0;
  PlayMeta::Type type = PlayMeta::Type::Unknown;
  bool found = false;
};

CarrierChoice pick_carrier(const RawDataset& ds, const PlayKey& key,
                           const PlayMeta& meta) {
  CarrierChoice c;
  if (auto it = ds.rush_player.find(key); it != ds.rush_player.end()) {
    c = {it->second, PlayMeta::Type::Run, true};
  } else if (auto it2 = ds.catch_player.find(key); it2 != ds.catch_player.end()) {
    c = {it2->second, PlayMeta::Type::Pass, true};
  } else if (meta.ball_carrier_id) {
    c = {*meta.ball_carrier_id, PlayMeta::Type::Unknown, true};
  }
  return c;
}

}  // namespace

std::vector<CarrierSequence> extract_carrier_sequences(RawDataset& ds) {
  if (!ds.standardized) standardize_play_direction(ds);
  std::vector<CarrierSequence> sequences;
  auto exclude = [&ds](const char* reason) {
    ++ds.report.plays_excluded[reason];
  };

  for (const auto& [key, by_player] : ds.tracking) {
    auto play_it = ds.plays.find(key);
    if (play_it == ds.plays.end()) {
      exclude("no_play_metadata");
      continue;
    }
    PlayMeta meta = play_it->second;

    const CarrierChoice choice = pick_carrier(ds, key, meta);
    if (!choice.found) {
      exclude("no_carrier");
      continue;
    }
    meta.type = choice.type;

    auto carrier_it = by_player.find(choice.carrier_id);
    if (carrier_it == by_player.end()) {
      exclude("carrier_not_tracked");
      continue;
    }
    const std::vector<Frame>& carrier_frames = carrier_it->second;

    auto player_it = ds.players.find(choice.carrier_id);
    if (player_it == ds.players.end()) {
      exclude("unknown_player");
      continue;
    }
    const Position pos = player_it->second.group;

    // First matching start event; type decides which vocabulary applies.
    std::size_t start_idx = carrier_frames.size();
    for (std::size_t i = 0; i < carrier_frames.size(); ++i) {
      const std::string& ev = carrier_frames[i].event;
      const bool run_start = is_run_start_event(ev);
      const bool pass_start = is_pass_start_event(ev);
      if ((meta.type == PlayMeta::Type::Run && run_start) ||
          (meta.type == PlayMeta::Type::Pass && pass_start) ||
          (meta.type == PlayMeta::Type::Unknown && (run_start || pass_start))) {
        start_idx = i;
        if (meta.type == PlayMeta::Type::Unknown) {
          meta.type = run_start ? PlayMeta::Type::Run : PlayMeta::Type::Pass;
        }
        break;
      }
    }
    if (start_idx == carrier_frames.size()) {
      exclude("no_start_event");
      continue;
    }
    std::size_t end_idx = carrier_frames.size();
    for (std::size_t i = start_idx + 1; i < carrier_frames.size(); ++i) {
      if (is_end_event(carrier_frames[i].event)) {
        end_idx = i;
        break;
      }
    }
    if (end_idx == carrier_frames.size()) {
      exclude("no_end_event");
      continue;
    }

    const bool position_ok = meta.type == PlayMeta::Type::Run
                                 ? pos == Position::RB
                                 : (pos == Position::RB || pos == Position::TE ||
                                    pos == Position::WR);
    if (!position_ok) {
      exclude("position_filter");
      continue;
    }
    if (end_idx - start_idx + 1 < static_cast<std::size_t>(kMinSequenceFrames)) {
      exclude("too_short");
      continue;
    }

    CarrierSequence seq;
    seq.meta = meta;
    seq.carrier_id = choice.carrier_id;
    seq.position = pos;
    seq.start_event = carrier_frames[start_idx].event;
    seq.end_event = carrier_frames[end_idx].event;
    seq.frames.reserve(end_idx - start_idx + 1);

    const std::string& carrier_club = carrier_frames[start_idx].club;
    bool aligned = true;
    for (std::size_t i = start_idx; i <= end_idx && aligned; ++i) {
      const Frame& cf = carrier_frames[i];
      if (i > start_idx &&
          cf.frame_id != carrier_frames[i - 1].frame_id + 1) {
        aligned = false;  // a dropped row broke contiguity
        break;
      }
      AlignedFrame af;
      af.carrier = cf;
      for (const auto& [pid, frames] : by_player) {
        if (pid == choice.carrier_id) continue;
        // Frames are sorted by frame_id; binary search the matching frame.
        auto it = std::lower_bound(
            frames.begin(), frames.end(), cf.frame_id,
            [](const Frame& f, int fid) { return f.frame_id < fid; });
        if (it == frames.end() || it->frame_id != cf.frame_id) continue;
        if (it->club == carrier_club) {
          af.teammates.push_back(*it);
        } else {
          af.defenders.push_back(*it);
        }
      }
      seq.frames.push_back(std::move(af));
    }
    if (!aligned) {
      exclude("broken_contiguity");
      continue;
    }
    sequences.push_back(std::move(seq));
  }
  ds.report.sequences_extracted = static_cast<long long>(sequences.size());
  return sequences;
}

}  // namespace turnmix
