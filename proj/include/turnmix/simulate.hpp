#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "turnmix/model.hpp"
#include "turnmix/rng.hpp"
#include "turnmix/von_mises.hpp"

namespace turnmix {

// Generative parameters on the natural scale.
struct TrueParams {
  double alpha0 = 0.0;
  std::array<double, kMeanCovariates> beta{};
  double gamma0 = 0.0;
  std::array<double, kConcCovariates> psi{};
  std::array<double, 3> sigma = {1.0, 1.0, 1.0};  // RB, TE, WR
};

// Default generative parameters: a realistic operating point (strong
// speed and run-play effects on concentration, flat mean model) used as
// the recovery-test truth.
TrueParams default_truth();

// Exact von Mises draw via the Best-Fisher rejection algorithm; kappa below
// 1e-7 falls back to the uniform circle. Requires kappa >= 0.
double sample_von_mises(const VonMisesParams& params, Rng& rng);

struct SimulateConfig {
  std::array<int, 3> players_per_position = {20, 20, 20};  // RB, TE, WR
  int rows_per_player = 200;
  int rows_per_play = 20;
  std::uint64_t seed = 1;
  // When non-empty, fixes the centered u_j instead of drawing them;
  // length must equal the total player count, in player-id order.
  std::vector<double> fixed_u;
};

struct SimulatedData {
  std::vector<ModelFrame> frames;
  std::vector<ModelDataset::Player> players;  // id + position, id-ascending
  std::vector<double> u;                      // realized centered effects
};

SimulatedData simulate_dataset(const TrueParams& truth,
                               const SimulateConfig& config);

void write_truth_manifest(const std::string& path, const TrueParams& truth,
                          const SimulateConfig& config,
                          const SimulatedData& data);

}  // namespace turnmix
