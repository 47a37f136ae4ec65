#pragma once

// Shared on-disk fixtures in the tracking-data schema. The builder writes a
// small but complete four-table dataset covering the main extraction paths:
// a clean rush, a leftward pass, a carrier filtered by position, a
// too-short sequence, and a play with no end event.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "turnmix/tracking.hpp"

namespace fixtures {

struct TrackingFixture {
  std::string dir;
  std::string tracking;
  std::string plays;
  std::string players;
  std::string player_play;

  turnmix::DatasetPaths paths() const {
    return {{tracking}, plays, players, player_play};
  }
};

// A fresh temp directory per test invocation.
inline std::string temp_dir(const std::string& tag) {
  const auto base = std::filesystem::temp_directory_path() /
                    ("turnmix_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  return base.string();
}

namespace detail {

struct Row {
  long long game, play, nfl;
  int frame;
  std::string club, direction;
  double x, y, s, a, dis, o, dir;
  std::string event;
};

inline void write_tracking_rows(const std::string& path,
                                const std::vector<Row>& rows) {
  std::ofstream out(path);
  out << "gameId,playId,nflId,frameId,time,club,playDirection,x,y,s,a,dis,o,"
         "dir,event\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.game << ',' << r.play << ',' << r.nfl << ',' << r.frame
        << ",2022-09-11 13:00:00," << r.club << ',' << r.direction << ',';
    auto num = [&](double v) {
      std::snprintf(buf, sizeof(buf), "%.4f", v);
      out << buf << ',';
    };
    num(r.x);
    num(r.y);
    num(r.s);
    num(r.a);
    num(r.dis);
    num(r.o);
    num(r.dir);
    out << r.event << '\n';
  }
}

// One full play: 22 players tracked over [1, n_frames]. The carrier walks a
// gentle sine path so turn angles are non-trivial; everyone else holds a
// fixed offset grid around the carrier.
inline void append_play(std::vector<Row>& rows, long long game, long long play,
                        long long carrier_id, const std::string& off_club,
                        const std::string& def_club,
                        const std::string& direction, int n_frames,
                        int start_frame, const std::string& start_event,
                        int end_frame, const std::string& end_event,
                        double x0 = 30.0) {
  const double step = direction == "left" ? -0.45 : 0.45;  // toward own end zone
  for (int f = 1; f <= n_frames; ++f) {
    const double t = f - 1;
    const double cx = x0 + step * t;
    const double cy = 22.0 + 1.8 * std::sin(0.22 * t);
    std::string event;
    if (f == start_frame) event = start_event;
    if (f == end_frame) event = end_event;
    rows.push_back({game, play, carrier_id, f, off_club, direction, cx, cy,
                    4.5, 1.0, 0.45, 90.0, 80.0, event});
    // 10 teammates behind/left, 11 defenders ahead/right.
    for (int k = 0; k < 10; ++k) {
      rows.push_back({game, play, carrier_id + 1 + k, f, off_club, direction,
                      cx - 2.0 - k, cy + 3.0 + 0.5 * k, 3.0, 0.5, 0.3, 45.0,
                      30.0, event});
    }
    for (int k = 0; k < 11; ++k) {
      rows.push_back({game, play, 900 + k, f, def_club, direction,
                      cx + 3.0 + k, cy - 2.0 - 0.5 * k, 3.5, 0.8, 0.35, 270.0,
                      260.0, event});
    }
  }
}

}  // namespace detail

// Players referenced by the fixture plays (ids fixed, see builder below).
inline constexpr long long kRushCarrier = 100;     // RB
inline constexpr long long kPassCarrier = 300;     // WR
inline constexpr long long kQbCarrier = 400;       // QB -> position filter
inline constexpr long long kShortCarrier = 500;    // RB, too-short sequence
inline constexpr long long kNoEndCarrier = 600;    // RB, no end event

inline TrackingFixture write_tracking_fixture(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  TrackingFixture fx;
  fx.dir = dir;
  fx.tracking = dir + "/tracking_week_1.csv";
  fx.plays = dir + "/plays.csv";
  fx.players = dir + "/players.csv";
  fx.player_play = dir + "/player_play.csv";

  std::vector<detail::Row> rows;
  // Play 1: rightward rush, handoff at frame 16, tackle at frame 44 -> the
  // carrier sequence spans 29 frames.
  detail::append_play(rows, 1, 1, kRushCarrier, "AAA", "BBB", "right", 50, 16,
                      "handoff", 44, "tackle");
  // Play 2: leftward pass, caught at frame 5, out of bounds at frame 20.
  detail::append_play(rows, 1, 2, kPassCarrier, "AAA", "BBB", "left", 24, 5,
                      "pass_outcome_caught", 20, "out_of_bounds", 70.0);
  // Play 3: pass caught by the quarterback -> excluded by position.
  detail::append_play(rows, 1, 3, kQbCarrier, "AAA", "BBB", "right", 18, 4,
                      "pass_outcome_caught", 15, "touchdown");
  // Play 4: rush whose sequence is 3 frames -> below the 4-frame minimum.
  detail::append_play(rows, 1, 4, kShortCarrier, "AAA", "BBB", "right", 12, 6,
                      "handoff", 8, "fumble");
  // Play 5: rush with a start but no end event.
  detail::append_play(rows, 1, 5, kNoEndCarrier, "AAA", "BBB", "right", 14, 3,
                      "handoff", -1, "");
  detail::write_tracking_rows(fx.tracking, rows);

  {
    std::ofstream out(fx.plays);
    out << "gameId,playId,possessionTeam,yardsToGo,absoluteYardlineNumber,"
           "ballCarrierId,playNullifiedByPenalty\n";
    out << "1,1,AAA,10,35," << kRushCarrier << ",N\n";
    out << "1,2,AAA,7,55," << kPassCarrier << ",N\n";
    out << "1,3,AAA,4,60," << kQbCarrier << ",N\n";
    out << "1,4,AAA,10,40," << kShortCarrier << ",N\n";
    out << "1,5,AAA,10,25," << kNoEndCarrier << ",N\n";
  }
  {
    std::ofstream out(fx.players);
    out << "nflId,height,weight,position,displayName\n";
    out << kRushCarrier << ",5-11,205,RB,Fixture Rusher\n";
    out << kPassCarrier << ",6-1,190,WR,Fixture Receiver\n";
    out << kQbCarrier << ",6-3,220,QB,Fixture Quarterback\n";
    out << kShortCarrier << ",5-10,200,RB,Fixture Short\n";
    out << kNoEndCarrier << ",5-10,200,RB,Fixture NoEnd\n";
    for (int k = 0; k < 10; ++k) {
      for (long long base : {kRushCarrier, kPassCarrier, kQbCarrier,
                             kShortCarrier, kNoEndCarrier}) {
        out << (base + 1 + k) << ",6-2,240,G,Blocker " << base + 1 + k << "\n";
      }
    }
    for (int k = 0; k < 11; ++k) {
      out << (900 + k) << ",6-2,240,ILB,Defender " << 900 + k << "\n";
    }
  }
  {
    std::ofstream out(fx.player_play);
    out << "gameId,playId,nflId,hadRushAttempt,hadPassReception\n";
    out << "1,1," << kRushCarrier << ",1,0\n";
    out << "1,2," << kPassCarrier << ",0,1\n";
    out << "1,3," << kQbCarrier << ",0,1\n";
    out << "1,4," << kShortCarrier << ",1,0\n";
    out << "1,5," << kNoEndCarrier << ",1,0\n";
  }
  return fx;
}

}  // namespace fixtures
