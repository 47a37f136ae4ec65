#include "turnmix/simulate.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace turnmix {

TrueParams default_truth() {
  TrueParams t;
  t.gamma0 = 1.309;
  t.psi = {0.709, -0.094, -0.015, 0.044, 0.064, -0.134};
  t.sigma = {0.135, 0.300, 0.304};
  return t;
}

double sample_von_mises(const VonMisesParams& params, Rng& rng) {
  if (!(params.kappa >= 0.0)) {
    throw std::invalid_argument("kappa must be non-negative");
  }
  if (params.kappa < 1e-7) {
    return wrap_angle(params.mu + kPi * (1.0 - 2.0 * rng.uniform()));
  }
  // Best & Fisher (1979) wrapped-Cauchy envelope rejection.
  const double kappa = params.kappa;
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double z = std::cos(kPi * rng.uniform());
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.uniform_pos();
    if (c * (2.0 - c) - u2 > 0.0 ||
        std::log(c / u2) + 1.0 - c >= 0.0) {
      const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
      return wrap_angle(params.mu + sign * std::acos(f));
    }
  }
}

namespace {

Position position_of_group(int g) {
  switch (g) {
    case 0: return Position::RB;
    case 1: return Position::TE;
    default: return Position::WR;
  }
}

double truncated_normal(Rng& rng, double sd, double bound) {
  for (;;) {
    const double v = sd * rng.normal();
    if (std::abs(v) <= bound) return v;
  }
}

}  // namespace

SimulatedData simulate_dataset(const TrueParams& truth,
                               const SimulateConfig& config) {
  for (double s : truth.sigma) {
    if (!(s > 0.0)) throw std::invalid_argument("sigma must be positive");
  }
  if (config.rows_per_player < 1 || config.rows_per_play < 1) {
    throw std::invalid_argument("row counts must be positive");
  }
  SimulatedData out;
  int total_players = 0;
  for (int g = 0; g < 3; ++g) total_players += config.players_per_position[g];
  if (!config.fixed_u.empty() &&
      config.fixed_u.size() != static_cast<std::size_t>(total_players)) {
    throw std::invalid_argument("fixed_u length must match player count");
  }
  out.frames.reserve(static_cast<std::size_t>(total_players) *
                     config.rows_per_player);
  out.players.reserve(total_players);
  out.u.reserve(total_players);

  int ordinal = 0;
  long long play_counter = 0;
  for (int g = 0; g < 3; ++g) {
    const Position pos = position_of_group(g);
    for (int p = 0; p < config.players_per_position[g]; ++p, ++ordinal) {
      // Player ids grouped by position: 1001.. RB, 2001.. TE, 3001.. WR.
      const long long player_id = 1000LL * (g + 1) + p + 1;
      out.players.push_back({player_id, pos});
      // Dedicated substream per player so the draw order never matters.
      Rng rng(config.seed, 1000000ULL + static_cast<std::uint64_t>(ordinal));
      const double u = config.fixed_u.empty()
                           ? truth.sigma[g] * rng.normal()
                           : config.fixed_u[ordinal];
      out.u.push_back(u);

      bool is_run = false;
      double cum_dist = 0.0;
      for (int row = 0; row < config.rows_per_player; ++row) {
        const int frame_in_play = row % config.rows_per_play;
        if (frame_in_play == 0) {
          ++play_counter;
          cum_dist = 0.0;
          // Only RB carriers get rushing plays; TE/WR sequences are catches.
          is_run = pos == Position::RB && rng.uniform() < 0.8;
        }
        ModelFrame f;
        f.game_id = 1;
        f.play_id = play_counter;
        f.frame_id = frame_in_play + 1;
        f.player_id = player_id;
        f.position = pos;

        const double speed = 1.0 + 8.0 * rng.uniform();
        const double accel = truncated_normal(rng, 1.5, 6.0);
        cum_dist += speed * 0.1;
        f.z[kSpeed] = speed;
        f.z[kAccel] = accel;
        f.z[kCumDistance] = cum_dist;
        f.z[kIsRun] = is_run ? 1.0 : 0.0;
        f.z[kIsTE] = pos == Position::TE ? 1.0 : 0.0;
        f.z[kIsWR] = pos == Position::WR ? 1.0 : 0.0;
        for (auto& x : f.x) x = rng.normal();

        double eta = truth.alpha0;
        for (std::size_t k = 0; k < kMeanCovariates; ++k) {
          eta += truth.beta[k] * f.x[k];
        }
        double log_kappa = truth.gamma0 + u;
        for (std::size_t k = 0; k < kConcCovariates; ++k) {
          log_kappa += truth.psi[k] * f.z[k];
        }
        const double mu = 2.0 * std::atan(eta);
        f.phi = sample_von_mises({mu, std::exp(log_kappa)}, rng);
        f.phi_prev = f.x[kPrevTurnAngle];
        out.frames.push_back(f);
      }
    }
  }
  return out;
}

void write_truth_manifest(const std::string& path, const TrueParams& truth,
                          const SimulateConfig& config,
                          const SimulatedData& data) {
  nlohmann::json j;
  j["truth"] = {{"alpha0", truth.alpha0},
                {"beta", truth.beta},
                {"gamma0", truth.gamma0},
                {"psi", truth.psi},
                {"sigma", truth.sigma}};
  j["config"] = {{"players_per_position", config.players_per_position},
                 {"rows_per_player", config.rows_per_player},
                 {"rows_per_play", config.rows_per_play},
                 {"seed", config.seed}};
  nlohmann::json players = nlohmann::json::array();
  for (std::size_t i = 0; i < data.players.size(); ++i) {
    players.push_back({{"player_id", data.players[i].player_id},
                       {"position", position_name(data.players[i].position)},
                       {"u", data.u[i]}});
  }
  j["players"] = std::move(players);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace turnmix
