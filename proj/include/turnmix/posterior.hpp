#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "turnmix/model.hpp"
#include "turnmix/sampler.hpp"

namespace turnmix {

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
};

struct PlayerRating {
  long long player_id = 0;
  std::string name;
  Position position = Position::Other;
  int plays = 0;
  double mean = 0.0;
  double q025 = 0.0;
  double q975 = 0.0;
  int rank = 0;  // within position, ascending by mean (1 = most variable)
};

struct PositionFloors {
  int rb = 25;
  int te = 10;
  int wr = 15;
  int floor_for(Position p) const;
};

struct RosterEntry {
  long long player_id = 0;
  std::string name;
  Position position = Position::Other;
  int plays = 0;
};

// Distinct plays per player, with optional display names keyed by player id.
std::vector<RosterEntry> build_roster(
    std::span<const ModelFrame> frames,
    const std::unordered_map<long long, std::string>& names = {});

// Linear-interpolation (type 7) quantile; `sorted` must be ascending.
double quantile_type7(std::span<const double> sorted, double p);

SummaryRow summarize_series(const std::string& name,
                            std::span<const double> values);

// Summaries over pooled post-warmup draws. Player effects are reported on
// the centered scale u_j = sigma_{p[j]} * u_tilde_j computed per draw, under
// the names "u_<player_id>"; "sigma_rb"/"sigma_te"/"sigma_wr" report
// exp(log_sigma_*). All raw parameter names are accepted as-is.
class PosteriorSummary {
 public:
  PosteriorSummary(const PosteriorDraws& draws, const ModelDataset& data);

  SummaryRow row(const std::string& name) const;
  std::vector<SummaryRow> rows(const std::vector<std::string>& names) const;
  std::vector<SummaryRow> fixed_effect_rows() const;  // alpha0, beta, gamma0, psi
  std::vector<SummaryRow> sigma_rows() const;         // natural scale
  // Pooled centered draws of player j (index into data.players).
  std::vector<double> centered_player_draws(std::size_t j) const;

  std::vector<PlayerRating> ratings(std::span<const RosterEntry> roster,
                                    const PositionFloors& floors) const;

 private:
  const PosteriorDraws& draws_;
  const ModelDataset& data_;
};

// Histogram over (-pi, pi] with left-closed bins, the last bin closed at pi
// so every wrapped angle lands in exactly one bin.
std::vector<long> angle_histogram(std::span<const double> angles,
                                  int bins = 64);

struct CombineCorrelation {
  std::string scope;  // "all", "RB", "TE", "WR"
  int n = 0;
  double r = 0.0;  // NaN when fewer than 2 matched pairs
};

struct CombineJoinReport {
  int matched = 0;
  int missing_time = 0;  // rated players absent from the combine table
  std::vector<CombineCorrelation> correlations;
};

std::unordered_map<long long, double> load_combine_csv(const std::string& path);

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);
void write_ratings_csv(const std::string& path,
                       const std::vector<PlayerRating>& ratings);
void write_histogram_csv(const std::string& path,
                         const std::vector<long>& counts);

// Writes speed_turn_profile.csv and combine_join_report.txt into out_dir and
// returns the join statistics.
CombineJoinReport write_combine_profile(
    const std::string& out_dir, const std::vector<PlayerRating>& ratings,
    const std::unordered_map<long long, double>& combine);

// The full summarize-stage artifact set. `combine` may be empty.
void export_artifacts(
    const std::string& out_dir, const std::vector<SummaryRow>& fixed_effects,
    const std::vector<SummaryRow>& sigmas,
    const std::vector<PlayerRating>& ratings, std::span<const double> angles,
    const std::optional<std::unordered_map<long long, double>>& combine);

}  // namespace turnmix
