#include "turnmix/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "turnmix/von_mises.hpp"

namespace turnmix {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454835606594728112353;

int sigma_index_for(Position p) {
  switch (p) {
    case Position::RB: return 0;
    case Position::TE: return 1;
    case Position::WR: return 2;
    default:
      throw std::invalid_argument("model rows must be RB/TE/WR carriers");
  }
}
}  // namespace

const std::array<std::string, kMeanCovariates>& mean_covariate_names() {
  static const std::array<std::string, kMeanCovariates> names = {
      "prev_turn_angle", "x_from_endzone",       "y_from_center",
      "x_from_first_down", "defenders_in_front", "defenders_left",
      "teammates_in_front", "teammates_left",    "def_speed",
      "def_rel_motion_angle", "def_rel_x",       "def_rel_y_abs",
      "def_distance",     "def_x_from_endzone",  "def_y_from_center"};
  return names;
}

const std::array<std::string, kConcCovariates>& conc_covariate_names() {
  static const std::array<std::string, kConcCovariates> names = {
      "speed", "accel", "cum_distance", "is_run", "is_te", "is_wr"};
  return names;
}

ModelDataset make_dataset(std::span<const ModelFrame> frames) {
  std::map<long long, Position> by_id;
  for (const ModelFrame& f : frames) {
    auto [it, inserted] = by_id.emplace(f.player_id, f.position);
    if (!inserted && it->second != f.position) {
      throw std::invalid_argument("player " + std::to_string(f.player_id) +
                                  " appears with two positions");
    }
  }
  ModelDataset out;
  out.players.reserve(by_id.size());
  std::map<long long, int> index;
  for (const auto& [id, pos] : by_id) {
    index[id] = static_cast<int>(out.players.size());
    out.players.push_back({id, pos});
    out.sigma_index.push_back(sigma_index_for(pos));
  }
  const std::size_t n = frames.size();
  out.phi.reserve(n);
  out.x.reserve(n * kMeanCovariates);
  out.z.reserve(n * kConcCovariates);
  out.player_index.reserve(n);
  for (const ModelFrame& f : frames) {
    out.phi.push_back(f.phi);
    out.x.insert(out.x.end(), f.x.begin(), f.x.end());
    out.z.insert(out.z.end(), f.z.begin(), f.z.end());
    out.player_index.push_back(index.at(f.player_id));
  }
  return out;
}

ParameterVector unpack(std::span<const double> theta,
                       std::size_t num_players) {
  const std::size_t expected =
      TurnModel::kUOffset + num_players + TurnModel::kNumSigmas;
  if (theta.size() != expected) {
    throw std::invalid_argument(
        "unpack: expected " + std::to_string(expected) + " parameters for " +
        std::to_string(num_players) + " players, got " +
        std::to_string(theta.size()));
  }
  ParameterVector out;
  out.alpha0 = theta[TurnModel::kAlpha0];
  std::copy_n(theta.begin() + TurnModel::kBetaOffset, kMeanCovariates,
              out.beta.begin());
  out.gamma0 = theta[TurnModel::kGamma0];
  std::copy_n(theta.begin() + TurnModel::kPsiOffset, kConcCovariates,
              out.psi.begin());
  out.u_tilde.assign(theta.begin() + TurnModel::kUOffset,
                     theta.begin() + TurnModel::kUOffset + num_players);
  std::copy_n(theta.begin() + TurnModel::kUOffset + num_players,
              TurnModel::kNumSigmas, out.log_sigma.begin());
  return out;
}

std::vector<double> pack(const ParameterVector& params) {
  std::vector<double> theta;
  theta.reserve(TurnModel::kUOffset + params.u_tilde.size() +
                TurnModel::kNumSigmas);
  theta.push_back(params.alpha0);
  theta.insert(theta.end(), params.beta.begin(), params.beta.end());
  theta.push_back(params.gamma0);
  theta.insert(theta.end(), params.psi.begin(), params.psi.end());
  theta.insert(theta.end(), params.u_tilde.begin(), params.u_tilde.end());
  theta.insert(theta.end(), params.log_sigma.begin(), params.log_sigma.end());
  return theta;
}

TurnModel::TurnModel(ModelDataset data, PriorConfig prior)
    : data_(std::move(data)), prior_(prior) {}

double TurnModel::log_posterior(std::span<const double> q,
                                std::span<double> grad) const {
  const std::size_t n = data_.rows();
  const std::size_t J = data_.num_players();
  if (q.size() != dim() || grad.size() != dim()) {
    throw std::invalid_argument("parameter vector has wrong dimension");
  }
  std::fill(grad.begin(), grad.end(), 0.0);

  const double alpha0 = q[kAlpha0];
  const double* beta = q.data() + kBetaOffset;
  const double gamma0 = q[kGamma0];
  const double* psi = q.data() + kPsiOffset;
  const double* u_tilde = q.data() + kUOffset;
  const double* log_sigma = q.data() + log_sigma_offset();

  double sigma[kNumSigmas];
  for (std::size_t p = 0; p < kNumSigmas; ++p) sigma[p] = std::exp(log_sigma[p]);

  std::vector<double> u(J), du(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) {
    u[j] = sigma[data_.sigma_index[j]] * u_tilde[j];
  }

  // Likelihood, Kahan-compensated.
  double sum = 0.0, comp = 0.0;
  auto accumulate = [&](double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };

  double* gbeta = grad.data() + kBetaOffset;
  double* gpsi = grad.data() + kPsiOffset;
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = data_.x.data() + i * kMeanCovariates;
    const double* zi = data_.z.data() + i * kConcCovariates;
    const int j = data_.player_index[i];

    double eta = alpha0;
    for (std::size_t k = 0; k < kMeanCovariates; ++k) eta += beta[k] * xi[k];
    double log_kappa = gamma0 + u[j];
    for (std::size_t k = 0; k < kConcCovariates; ++k) log_kappa += psi[k] * zi[k];
    if (!(log_kappa <= prior_.kappa_log_clip)) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return kNegInf;
    }
    const double kappa = std::exp(log_kappa);
    const double mu = 2.0 * std::atan(eta);
    const double delta = data_.phi[i] - mu;
    const double cd = std::cos(delta);
    const double sd = std::sin(delta);
    const BesselI0Result bess = bessel_i0_pair(kappa);

    accumulate(kappa * cd - bess.log_i0);

    const double deta = kappa * sd * 2.0 / (1.0 + eta * eta);
    grad[kAlpha0] += deta;
    for (std::size_t k = 0; k < kMeanCovariates; ++k) gbeta[k] += deta * xi[k];
    const double dlk = kappa * (cd - bess.ratio);
    grad[kGamma0] += dlk;
    for (std::size_t k = 0; k < kConcCovariates; ++k) gpsi[k] += dlk * zi[k];
    du[j] += dlk;
  }
  double lp = sum - static_cast<double>(n) * kLogTwoPi;

  // Non-centered intercepts: chain through u_j = sigma_p * u_tilde_j, plus
  // the standard-normal prior on u_tilde.
  double* gu = grad.data() + kUOffset;
  double* gls = grad.data() + log_sigma_offset();
  for (std::size_t j = 0; j < J; ++j) {
    const int p = data_.sigma_index[j];
    gu[j] = du[j] * sigma[p] - u_tilde[j];
    gls[p] += du[j] * u_tilde[j] * sigma[p];
    lp += -0.5 * kLogTwoPi - 0.5 * u_tilde[j] * u_tilde[j];
  }

  // Normal(0, sd) priors on the fixed effects.
  const double inv_var = 1.0 / (prior_.fixed_effect_sd * prior_.fixed_effect_sd);
  const double fe_const = -0.5 * kLogTwoPi - std::log(prior_.fixed_effect_sd);
  auto fixed_prior = [&](std::size_t idx) {
    lp += fe_const - 0.5 * q[idx] * q[idx] * inv_var;
    grad[idx] -= q[idx] * inv_var;
  };
  fixed_prior(kAlpha0);
  for (std::size_t k = 0; k < kMeanCovariates; ++k) fixed_prior(kBetaOffset + k);
  fixed_prior(kGamma0);
  for (std::size_t k = 0; k < kConcCovariates; ++k) fixed_prior(kPsiOffset + k);

  // half-t(df, scale) prior on each sigma, with the exp-transform Jacobian.
  const double nu = prior_.sigma_df;
  const double s2 = prior_.sigma_scale * prior_.sigma_scale;
  const double ht_const = std::log(2.0) + std::lgamma(0.5 * (nu + 1.0)) -
                          std::lgamma(0.5 * nu) - 0.5 * std::log(nu * kPi) -
                          std::log(prior_.sigma_scale);
  for (std::size_t p = 0; p < kNumSigmas; ++p) {
    const double sq = sigma[p] * sigma[p];
    lp += ht_const - 0.5 * (nu + 1.0) * std::log1p(sq / (nu * s2)) +
          log_sigma[p];
    gls[p] += 1.0 - (nu + 1.0) * sq / (nu * s2 + sq);
  }

  if (!std::isfinite(lp)) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return kNegInf;
  }
  return lp;
}

double TurnModel::log_posterior_value(std::span<const double> q) const {
  std::vector<double> scratch(dim());
  return log_posterior(q, scratch);
}

std::vector<std::string> TurnModel::parameter_names() const {
  std::vector<std::string> names;
  names.reserve(dim());
  names.push_back("alpha0");
  for (const auto& c : mean_covariate_names()) names.push_back("beta_" + c);
  names.push_back("gamma0");
  for (const auto& c : conc_covariate_names()) names.push_back("psi_" + c);
  for (const auto& pl : data_.players) {
    names.push_back("u_tilde_" + std::to_string(pl.player_id));
  }
  names.push_back("log_sigma_rb");
  names.push_back("log_sigma_te");
  names.push_back("log_sigma_wr");
  return names;
}

}  // namespace turnmix
