#include "turnmix/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "turnmix/csv.hpp"

namespace turnmix {

namespace {

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

int PositionFloors::floor_for(Position p) const {
  switch (p) {
    case Position::RB: return rb;
    case Position::TE: return te;
    case Position::WR: return wr;
    default: return std::numeric_limits<int>::max();
  }
}

std::vector<RosterEntry> build_roster(
    std::span<const ModelFrame> frames,
    const std::unordered_map<long long, std::string>& names) {
  std::map<long long, std::pair<Position, std::set<std::pair<long long, long long>>>>
      plays;
  for (const ModelFrame& f : frames) {
    auto& entry = plays[f.player_id];
    entry.first = f.position;
    entry.second.insert({f.game_id, f.play_id});
  }
  std::vector<RosterEntry> out;
  out.reserve(plays.size());
  for (const auto& [id, entry] : plays) {
    RosterEntry r;
    r.player_id = id;
    r.position = entry.first;
    r.plays = static_cast<int>(entry.second.size());
    if (auto it = names.find(id); it != names.end()) r.name = it->second;
    out.push_back(std::move(r));
  }
  return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SummaryRow summarize_series(const std::string& name,
                            std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("no draws for " + name);
  SummaryRow row;
  row.name = name;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  row.mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - row.mean) * (v - row.mean);
  row.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  row.q025 = quantile_type7(sorted, 0.025);
  row.q975 = quantile_type7(sorted, 0.975);
  return row;
}

PosteriorSummary::PosteriorSummary(const PosteriorDraws& draws,
                                   const ModelDataset& data)
    : draws_(draws), data_(data) {}

std::vector<double> PosteriorSummary::centered_player_draws(
    std::size_t j) const {
  const std::size_t u_idx = TurnModel::kUOffset + j;
  const std::size_t ls_idx = TurnModel::kUOffset + data_.num_players() +
                             static_cast<std::size_t>(data_.sigma_index[j]);
  std::vector<double> out;
  out.reserve(draws_.num_chains() *
              static_cast<std::size_t>(draws_.kept_per_chain));
  for (std::size_t c = 0; c < draws_.num_chains(); ++c) {
    for (int d = 0; d < draws_.kept_per_chain; ++d) {
      out.push_back(std::exp(draws_.value(c, d, ls_idx)) *
                    draws_.value(c, d, u_idx));
    }
  }
  return out;
}

SummaryRow PosteriorSummary::row(const std::string& name) const {
  static const std::unordered_map<std::string, std::string> sigma_map = {
      {"sigma_rb", "log_sigma_rb"},
      {"sigma_te", "log_sigma_te"},
      {"sigma_wr", "log_sigma_wr"}};
  if (auto it = sigma_map.find(name); it != sigma_map.end()) {
    auto values = draws_.pooled(draws_.param_index(it->second));
    for (double& v : values) v = std::exp(v);
    return summarize_series(name, values);
  }
  if (name.rfind("u_", 0) == 0 && name.rfind("u_tilde_", 0) != 0) {
    const long long id = std::stoll(name.substr(2));
    for (std::size_t j = 0; j < data_.num_players(); ++j) {
      if (data_.players[j].player_id == id) {
        return summarize_series(name, centered_player_draws(j));
      }
    }
    throw std::invalid_argument("unknown player in " + name);
  }
  if (name.rfind("u_tilde_", 0) == 0) {
    // Player effects are reported centered per the artifact convention.
    const long long id = std::stoll(name.substr(8));
    for (std::size_t j = 0; j < data_.num_players(); ++j) {
      if (data_.players[j].player_id == id) {
        return summarize_series("u_" + std::to_string(id),
                                centered_player_draws(j));
      }
    }
    throw std::invalid_argument("unknown player in " + name);
  }
  return summarize_series(name, draws_.pooled(draws_.param_index(name)));
}

std::vector<SummaryRow> PosteriorSummary::rows(
    const std::vector<std::string>& names) const {
  std::vector<SummaryRow> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(row(n));
  return out;
}

std::vector<SummaryRow> PosteriorSummary::fixed_effect_rows() const {
  std::vector<std::string> names = {"alpha0"};
  for (const auto& c : mean_covariate_names()) names.push_back("beta_" + c);
  names.push_back("gamma0");
  for (const auto& c : conc_covariate_names()) names.push_back("psi_" + c);
  return rows(names);
}

std::vector<SummaryRow> PosteriorSummary::sigma_rows() const {
  return rows({"sigma_rb", "sigma_te", "sigma_wr"});
}

std::vector<PlayerRating> PosteriorSummary::ratings(
    std::span<const RosterEntry> roster, const PositionFloors& floors) const {
  std::unordered_map<long long, const RosterEntry*> by_id;
  for (const RosterEntry& r : roster) by_id[r.player_id] = &r;

  std::vector<PlayerRating> all;
  for (std::size_t j = 0; j < data_.num_players(); ++j) {
    const auto& player = data_.players[j];
    const auto it = by_id.find(player.player_id);
    const int plays = it != by_id.end() ? it->second->plays : 0;
    if (plays < floors.floor_for(player.position)) continue;
    auto values = centered_player_draws(j);
    const SummaryRow s =
        summarize_series("u_" + std::to_string(player.player_id), values);
    PlayerRating r;
    r.player_id = player.player_id;
    if (it != by_id.end()) r.name = it->second->name;
    r.position = player.position;
    r.plays = plays;
    r.mean = s.mean;
    r.q025 = s.q025;
    r.q975 = s.q975;
    all.push_back(std::move(r));
  }

  std::vector<PlayerRating> out;
  for (Position pos : {Position::RB, Position::TE, Position::WR}) {
    std::vector<PlayerRating> group;
    for (const auto& r : all) {
      if (r.position == pos) group.push_back(r);
    }
    std::sort(group.begin(), group.end(), [](const auto& a, const auto& b) {
      if (a.mean != b.mean) return a.mean < b.mean;
      return a.player_id < b.player_id;
    });
    for (std::size_t i = 0; i < group.size(); ++i) {
      group[i].rank = static_cast<int>(i) + 1;
    }
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

std::vector<long> angle_histogram(std::span<const double> angles, int bins) {
  if (bins < 1) throw std::invalid_argument("need at least one bin");
  std::vector<long> counts(bins, 0);
  const double width = kTwoPi / static_cast<double>(bins);
  for (double a : angles) {
    const double w = wrap_angle(a);
    int idx = static_cast<int>(std::floor((w + kPi) / width));
    idx = std::clamp(idx, 0, bins - 1);
    ++counts[idx];
  }
  return counts;
}

std::unordered_map<long long, double> load_combine_csv(
    const std::string& path) {
  CsvReader reader(path);
  const int id_col = reader.require_column("player_id");
  const int time_col = reader.require_column("forty_time_seconds");
  std::unordered_map<long long, double> out;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const auto id = parse_int(fields[id_col]);
    const auto t = parse_double(fields[time_col]);
    if (!id || !t) {
      throw SchemaError(path + ":" + std::to_string(reader.line()) +
                        ": bad combine row");
    }
    out[*id] = *t;
  }
  return out;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
  CsvWriter out(path);
  out.write_row({"parameter", "mean", "sd", "q2.5", "q97.5"});
  for (const auto& r : rows) {
    out.write_row({r.name, format_double(r.mean), format_double(r.sd),
                   format_double(r.q025), format_double(r.q975)});
  }
}

void write_ratings_csv(const std::string& path,
                       const std::vector<PlayerRating>& ratings) {
  CsvWriter out(path);
  out.write_row({"player_id", "name", "position", "plays", "u_mean", "u_q2.5",
                 "u_q97.5", "rank"});
  for (const auto& r : ratings) {
    out.write_row({std::to_string(r.player_id), r.name,
                   position_name(r.position), std::to_string(r.plays),
                   format_double(r.mean), format_double(r.q025),
                   format_double(r.q975), std::to_string(r.rank)});
  }
}

void write_histogram_csv(const std::string& path,
                         const std::vector<long>& counts) {
  CsvWriter out(path);
  out.write_row({"bin", "left", "right", "count"});
  const double width = kTwoPi / static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.write_row({std::to_string(i), format_double(-kPi + width * i),
                   format_double(-kPi + width * (i + 1)),
                   std::to_string(counts[i])});
  }
}

CombineJoinReport write_combine_profile(
    const std::string& out_dir, const std::vector<PlayerRating>& ratings,
    const std::unordered_map<long long, double>& combine) {
  CombineJoinReport report;
  CsvWriter out(out_dir + "/speed_turn_profile.csv");
  out.write_row(
      {"player_id", "name", "position", "u_mean", "forty_time_seconds"});

  struct Pairs {
    std::vector<double> u, t;
  };
  Pairs all;
  std::map<Position, Pairs> by_pos;
  for (const auto& r : ratings) {
    const auto it = combine.find(r.player_id);
    std::string time_field;
    if (it != combine.end()) {
      time_field = format_double(it->second);
      all.u.push_back(r.mean);
      all.t.push_back(it->second);
      by_pos[r.position].u.push_back(r.mean);
      by_pos[r.position].t.push_back(it->second);
      ++report.matched;
    } else {
      ++report.missing_time;
    }
    out.write_row({std::to_string(r.player_id), r.name,
                   position_name(r.position), format_double(r.mean),
                   time_field});
  }

  report.correlations.push_back(
      {"all", static_cast<int>(all.u.size()), pearson(all.u, all.t)});
  for (Position pos : {Position::RB, Position::TE, Position::WR}) {
    const Pairs& p = by_pos[pos];
    report.correlations.push_back(
        {position_name(pos), static_cast<int>(p.u.size()), pearson(p.u, p.t)});
  }

  std::ofstream rep(out_dir + "/combine_join_report.txt");
  if (!rep) throw std::runtime_error("cannot open combine_join_report.txt");
  rep << "rated players: " << ratings.size() << "\n"
      << "matched combine times: " << report.matched << "\n"
      << "missing combine times: " << report.missing_time << "\n";
  for (const auto& c : report.correlations) {
    rep << "pearson[" << c.scope << "] (n=" << c.n
        << "): " << (std::isnan(c.r) ? "undefined" : format_double(c.r))
        << "\n";
  }

  CsvWriter corr(out_dir + "/combine_correlations.csv");
  corr.write_row({"scope", "n", "pearson_r"});
  for (const auto& c : report.correlations) {
    corr.write_row({c.scope, std::to_string(c.n),
                    std::isnan(c.r) ? std::string() : format_double(c.r)});
  }
  return report;
}

void export_artifacts(
    const std::string& out_dir, const std::vector<SummaryRow>& fixed_effects,
    const std::vector<SummaryRow>& sigmas,
    const std::vector<PlayerRating>& ratings, std::span<const double> angles,
    const std::optional<std::unordered_map<long long, double>>& combine) {
  write_summary_csv(out_dir + "/fixed_effects.csv", fixed_effects);
  write_summary_csv(out_dir + "/sigmas.csv", sigmas);
  write_ratings_csv(out_dir + "/ratings.csv", ratings);
  write_histogram_csv(out_dir + "/turn_angle_histogram.csv",
                      angle_histogram(angles));
  if (combine) write_combine_profile(out_dir, ratings, *combine);
}

}  // namespace turnmix
