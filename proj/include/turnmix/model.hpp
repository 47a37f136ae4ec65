#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "turnmix/features.hpp"

namespace turnmix {

// Priors for the von Mises mixed-effects model. Fixed effects get
// normal(0, fixed_effect_sd); the per-position random-intercept scales get
// half-t(sigma_df, sigma_scale) on the natural scale, sampled as log(sigma).
struct PriorConfig {
  double fixed_effect_sd = 5.0;
  double sigma_scale = 2.5;
  double sigma_df = 3.0;
  // log(kappa) above this is treated as numerically unstable and the
  // posterior returns -inf so the sampler rejects the proposal.
  double kappa_log_clip = 30.0;
};

// Flattened, cache-friendly view of the model rows. Player indices are
// assigned by ascending player id so the packing is deterministic.
struct ModelDataset {
  struct Player {
    long long player_id = 0;
    Position position = Position::Other;
  };

  std::vector<double> phi;           // n
  std::vector<double> x;             // n * kMeanCovariates, row-major
  std::vector<double> z;             // n * kConcCovariates, row-major
  std::vector<int> player_index;     // n
  std::vector<Player> players;       // J
  std::vector<int> sigma_index;      // J: 0=RB, 1=TE, 2=WR

  std::size_t rows() const { return phi.size(); }
  std::size_t num_players() const { return players.size(); }
};

ModelDataset make_dataset(std::span<const ModelFrame> frames);

// Structured view of the packed parameter vector (see layout below).
struct ParameterVector {
  double alpha0 = 0.0;
  std::array<double, kMeanCovariates> beta{};
  double gamma0 = 0.0;
  std::array<double, kConcCovariates> psi{};
  std::vector<double> u_tilde;  // one entry per player
  std::array<double, 3> log_sigma{};
};

// Deterministic slicing of a packed vector for J players; pack(unpack(theta))
// round-trips exactly. Throws std::invalid_argument on a length mismatch.
ParameterVector unpack(std::span<const double> theta, std::size_t num_players);
std::vector<double> pack(const ParameterVector& params);

// Packed parameter layout:
//   [0]                alpha0
//   [1 .. 15]          beta (mean covariates)
//   [16]               gamma0
//   [17 .. 22]         psi (concentration covariates)
//   [23 .. 23+J-1]     u_tilde (non-centered player intercepts)
//   [23+J .. 25+J]     log sigma (RB, TE, WR)
class TurnModel {
 public:
  static constexpr std::size_t kAlpha0 = 0;
  static constexpr std::size_t kBetaOffset = 1;
  static constexpr std::size_t kGamma0 = 1 + kMeanCovariates;
  static constexpr std::size_t kPsiOffset = kGamma0 + 1;
  static constexpr std::size_t kUOffset = kPsiOffset + kConcCovariates;
  static constexpr std::size_t kNumSigmas = 3;

  TurnModel(ModelDataset data, PriorConfig prior = {});

  std::size_t dim() const { return kUOffset + data_.num_players() + kNumSigmas; }
  std::size_t log_sigma_offset() const { return kUOffset + data_.num_players(); }

  // Log posterior density (up to a constant) and its gradient. Returns -inf
  // (leaving the gradient unspecified) when any kappa overflows the clip.
  double log_posterior(std::span<const double> q, std::span<double> grad) const;
  double log_posterior_value(std::span<const double> q) const;

  std::vector<std::string> parameter_names() const;

  const ModelDataset& data() const { return data_; }
  const PriorConfig& prior() const { return prior_; }

 private:
  ModelDataset data_;
  PriorConfig prior_;
};

const std::array<std::string, kMeanCovariates>& mean_covariate_names();
const std::array<std::string, kConcCovariates>& conc_covariate_names();

}  // namespace turnmix
