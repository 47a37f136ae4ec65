#include "turnmix/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "turnmix/csv.hpp"
#include "turnmix/rng.hpp"

namespace turnmix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

struct State {
  std::vector<double> q, r, grad;
  double lp = kNegInf;
};

struct Proposal {
  std::vector<double> q, grad;
  double lp = kNegInf;
};

// Boundary states of a subtree, in integration order (beg = where the
// subtree started growing, end = outermost point).
struct SubtreeEnds {
  std::vector<double> q_beg, r_beg, q_end, r_end;
};

// Streaming mean/variance for the diagonal metric windows.
class Welford {
 public:
  explicit Welford(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}
  void add(std::span<const double> q) {
    ++n_;
    for (std::size_t k = 0; k < mean_.size(); ++k) {
      const double d = q[k] - mean_[k];
      mean_[k] += d / static_cast<double>(n_);
      m2_[k] += d * (q[k] - mean_[k]);
    }
  }
  long count() const { return n_; }
  double variance(std::size_t k) const {
    return n_ > 1 ? m2_[k] / static_cast<double>(n_ - 1) : 0.0;
  }
  void reset() {
    n_ = 0;
    std::fill(mean_.begin(), mean_.end(), 0.0);
    std::fill(m2_.begin(), m2_.end(), 0.0);
  }

 private:
  long n_ = 0;
  std::vector<double> mean_, m2_;
};

// Nesterov dual averaging of log(step size), as in Stan.
class DualAveraging {
 public:
  DualAveraging(const SamplerConfig& cfg) : cfg_(cfg) {}
  void restart(double epsilon) {
    mu_ = std::log(10.0 * epsilon);
    counter_ = 0;
    s_bar_ = 0.0;
    x_bar_ = 0.0;
  }
  double update(double accept_stat) {
    accept_stat = std::isfinite(accept_stat) ? std::min(1.0, accept_stat) : 0.0;
    ++counter_;
    const double eta = 1.0 / (counter_ + cfg_.adapt_t0);
    s_bar_ = (1.0 - eta) * s_bar_ + eta * (cfg_.target_accept - accept_stat);
    const double x = mu_ - s_bar_ * std::sqrt(static_cast<double>(counter_)) /
                               cfg_.adapt_gamma;
    const double x_eta = std::pow(static_cast<double>(counter_), -cfg_.adapt_kappa);
    x_bar_ = (1.0 - x_eta) * x_bar_ + x_eta * x;
    return std::exp(x);
  }
  double final_epsilon() const { return std::exp(x_bar_); }

 private:
  const SamplerConfig& cfg_;
  double mu_ = 0.0, s_bar_ = 0.0, x_bar_ = 0.0;
  long counter_ = 0;
};

class NutsChain {
 public:
  NutsChain(const LogDensityGradient& target, std::size_t dim,
            const SamplerConfig& cfg, int chain_index,
            const std::vector<double>* initial)
      : target_(target),
        dim_(dim),
        cfg_(cfg),
        rng_(cfg.seed, static_cast<std::uint64_t>(chain_index)),
        inv_mass_(dim, 1.0),
        da_(cfg) {
    initialize(initial);
  }

  ChainResult run() {
    const auto start = std::chrono::steady_clock::now();
    ChainResult out;
    const int kept = cfg_.kept_per_chain();
    out.draws.reserve(static_cast<std::size_t>(kept) * dim_);
    out.lp.reserve(kept);
    out.treedepth.reserve(kept);
    out.divergent.reserve(kept);

    const std::vector<int> window_ends = slow_window_ends();
    Welford welford(dim_);
    eps_ = find_initial_step_size();
    da_.restart(eps_);
    std::size_t next_window = 0;

    for (int iter = 0; iter < cfg_.iterations; ++iter) {
      const bool warming = iter < cfg_.warmup;
      const auto result = transition();

      if (warming) {
        if (result.divergent) ++out.warmup_divergences;
        eps_ = da_.update(result.accept_stat);
        const bool in_slow = iter >= cfg_.init_buffer &&
                             iter < cfg_.warmup - cfg_.term_buffer;
        if (in_slow) welford.add(current_.q);
        if (next_window < window_ends.size() &&
            iter + 1 == window_ends[next_window]) {
          update_metric(welford);
          welford.reset();
          ++next_window;
          eps_ = find_initial_step_size();
          da_.restart(eps_);
        }
        if (iter + 1 == cfg_.warmup) eps_ = da_.final_epsilon();
      } else {
        if (result.divergent) ++out.divergences;
        if (result.depth >= cfg_.max_treedepth) ++out.max_depth_hits;
        out.draws.insert(out.draws.end(), current_.q.begin(), current_.q.end());
        out.lp.push_back(current_.lp);
        out.treedepth.push_back(result.depth);
        out.divergent.push_back(result.divergent ? 1 : 0);
      }
    }
    out.step_size = eps_;
    out.inv_mass = inv_mass_;
    out.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    return out;
  }

 private:
  struct TransitionStats {
    int depth = 0;
    bool divergent = false;
    double accept_stat = 0.0;
  };

  void initialize(const std::vector<double>* initial) {
    current_.q.assign(dim_, 0.0);
    current_.r.assign(dim_, 0.0);
    current_.grad.assign(dim_, 0.0);
    if (initial) {
      if (initial->size() != dim_) {
        throw std::invalid_argument("initial point has wrong dimension");
      }
      current_.q = *initial;
      current_.lp = target_(current_.q, current_.grad);
      if (gradient_ok(current_.lp)) return;
      throw std::runtime_error("log density not finite at the supplied init");
    }
    for (int attempt = 0; attempt < 100; ++attempt) {
      for (auto& v : current_.q) {
        v = cfg_.init_radius * (2.0 * rng_.uniform() - 1.0);
      }
      current_.lp = target_(current_.q, current_.grad);
      if (gradient_ok(current_.lp)) return;
    }
    throw std::runtime_error(
        "failed to find a valid initial point in 100 attempts");
  }

  bool gradient_ok(double lp) const {
    if (!std::isfinite(lp)) return false;
    for (double g : current_.grad) {
      if (!std::isfinite(g)) return false;
    }
    return true;
  }

  std::vector<int> slow_window_ends() const {
    std::vector<int> ends;
    const int slow_end = cfg_.warmup - cfg_.term_buffer;
    int pos = cfg_.init_buffer;
    int w = cfg_.base_window;
    while (pos < slow_end) {
      int next = pos + w;
      if (next + 2 * w > slow_end || next > slow_end) next = slow_end;
      ends.push_back(next);
      pos = next;
      w *= 2;
    }
    return ends;
  }

  void update_metric(const Welford& welford) {
    const double n = static_cast<double>(welford.count());
    if (n < 1) return;
    for (std::size_t k = 0; k < dim_; ++k) {
      inv_mass_[k] =
          (n / (n + 5.0)) * welford.variance(k) + 1e-3 * (5.0 / (n + 5.0));
    }
  }

  double hamiltonian(const State& s) const {
    double kin = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      kin += s.r[k] * s.r[k] * inv_mass_[k];
    }
    return -s.lp + 0.5 * kin;
  }

  void sample_momentum(State& s) {
    for (std::size_t k = 0; k < dim_; ++k) {
      s.r[k] = rng_.normal() / std::sqrt(inv_mass_[k]);
    }
  }

  void leapfrog(State& s, double eps_signed) {
    for (std::size_t k = 0; k < dim_; ++k) s.r[k] += 0.5 * eps_signed * s.grad[k];
    for (std::size_t k = 0; k < dim_; ++k) {
      s.q[k] += eps_signed * inv_mass_[k] * s.r[k];
    }
    s.lp = target_(s.q, s.grad);
    for (std::size_t k = 0; k < dim_; ++k) s.r[k] += 0.5 * eps_signed * s.grad[k];
  }

  // Stan's heuristic: double/halve until one leapfrog's accept prob crosses
  // 0.8, resampling the momentum each trial.
  double find_initial_step_size() {
    double eps = 1.0;
    int direction = 0;
    for (int trial = 0; trial < 100; ++trial) {
      State z = current_;
      sample_momentum(z);
      const double h0 = hamiltonian(z);
      leapfrog(z, eps);
      double h = hamiltonian(z);
      if (std::isnan(h)) h = std::numeric_limits<double>::infinity();
      const double delta_h = h0 - h;
      const double threshold = std::log(0.8);
      if (direction == 0) direction = delta_h > threshold ? 1 : -1;
      if (direction == 1) {
        if (!(delta_h > threshold)) break;
        eps *= 2.0;
      } else {
        if (!(delta_h < threshold)) break;
        eps *= 0.5;
      }
      if (eps > 1e7 || eps < 1e-16) break;
    }
    return eps;
  }

  bool is_uturn(const std::vector<double>& q_minus,
                const std::vector<double>& r_minus,
                const std::vector<double>& q_plus,
                const std::vector<double>& r_plus) const {
    double fwd = 0.0, bck = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double dq = (q_plus[k] - q_minus[k]) * inv_mass_[k];
      fwd += dq * r_plus[k];
      bck += dq * r_minus[k];
    }
    return !(fwd > 0.0 && bck > 0.0);
  }

  bool subtree_uturn(const SubtreeEnds& e, double sign) const {
    if (sign > 0) return is_uturn(e.q_beg, e.r_beg, e.q_end, e.r_end);
    return is_uturn(e.q_end, e.r_end, e.q_beg, e.r_beg);
  }

  // Grows a subtree of 2^depth leapfrog steps from the edge state z in the
  // given direction. Returns false when the subtree diverged or U-turned,
  // in which case none of its states may be used.
  bool build_tree(int depth, State& z, double sign, SubtreeEnds& ends,
                  Proposal& prop, double& log_sum_weight) {
    if (depth == 0) {
      leapfrog(z, sign * eps_);
      double h = hamiltonian(z);
      if (std::isnan(h)) h = std::numeric_limits<double>::infinity();
      const double dh = h - h0_;
      sum_metro_ += dh > 0.0 ? std::exp(-dh) : 1.0;
      ++n_metro_;
      if (dh > cfg_.divergence_threshold) {
        divergent_ = true;
        return false;
      }
      log_sum_weight = -dh;
      prop.q = z.q;
      prop.grad = z.grad;
      prop.lp = z.lp;
      ends.q_beg = z.q;
      ends.r_beg = z.r;
      ends.q_end = z.q;
      ends.r_end = z.r;
      return true;
    }
    double lw1 = kNegInf;
    if (!build_tree(depth - 1, z, sign, ends, prop, lw1)) return false;
    SubtreeEnds outer;
    Proposal prop2;
    double lw2 = kNegInf;
    if (!build_tree(depth - 1, z, sign, outer, prop2, lw2)) return false;
    log_sum_weight = log_sum_exp(lw1, lw2);
    if (rng_.uniform() < std::exp(lw2 - log_sum_weight)) prop = std::move(prop2);
    ends.q_end = std::move(outer.q_end);
    ends.r_end = std::move(outer.r_end);
    return !subtree_uturn(ends, sign);
  }

  TransitionStats transition() {
    sample_momentum(current_);
    h0_ = hamiltonian(current_);
    sum_metro_ = 0.0;
    n_metro_ = 0;
    divergent_ = false;

    State fwd = current_;
    State bck = current_;
    std::vector<double> q_minus = current_.q, r_minus = current_.r;
    std::vector<double> q_plus = current_.q, r_plus = current_.r;
    Proposal sample{current_.q, current_.grad, current_.lp};
    double log_sum_weight = 0.0;

    TransitionStats stats;
    while (stats.depth < cfg_.max_treedepth) {
      const double sign = rng_.uniform() < 0.5 ? -1.0 : 1.0;
      State& edge = sign > 0 ? fwd : bck;
      SubtreeEnds ends;
      Proposal prop;
      double lw_sub = kNegInf;
      if (!build_tree(stats.depth, edge, sign, ends, prop, lw_sub)) break;
      ++stats.depth;
      // Biased progressive sampling: prefer the new half of the trajectory.
      const double log_accept = lw_sub - log_sum_weight;
      if (log_accept > 0.0 || rng_.uniform() < std::exp(log_accept)) {
        sample = std::move(prop);
      }
      log_sum_weight = log_sum_exp(log_sum_weight, lw_sub);
      if (sign > 0) {
        q_plus = std::move(ends.q_end);
        r_plus = std::move(ends.r_end);
      } else {
        q_minus = std::move(ends.q_end);
        r_minus = std::move(ends.r_end);
      }
      if (is_uturn(q_minus, r_minus, q_plus, r_plus)) break;
    }

    current_.q = std::move(sample.q);
    current_.grad = std::move(sample.grad);
    current_.lp = sample.lp;
    stats.divergent = divergent_;
    stats.accept_stat = n_metro_ > 0 ? sum_metro_ / n_metro_ : 0.0;
    return stats;
  }

  const LogDensityGradient& target_;
  std::size_t dim_;
  const SamplerConfig& cfg_;
  Rng rng_;
  std::vector<double> inv_mass_;
  DualAveraging da_;
  State current_;
  double eps_ = 1.0;
  double h0_ = 0.0;
  double sum_metro_ = 0.0;
  int n_metro_ = 0;
  bool divergent_ = false;
};

}  // namespace

std::vector<double> PosteriorDraws::column(std::size_t chain,
                                           std::size_t param) const {
  std::vector<double> out(kept_per_chain);
  for (int d = 0; d < kept_per_chain; ++d) out[d] = value(chain, d, param);
  return out;
}

std::vector<double> PosteriorDraws::pooled(std::size_t param) const {
  std::vector<double> out;
  out.reserve(num_chains() * static_cast<std::size_t>(kept_per_chain));
  for (std::size_t c = 0; c < num_chains(); ++c) {
    for (int d = 0; d < kept_per_chain; ++d) out.push_back(value(c, d, param));
  }
  return out;
}

int PosteriorDraws::total_divergences() const {
  int n = 0;
  for (const auto& c : chains) n += c.divergences;
  return n;
}

std::size_t PosteriorDraws::param_index(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw std::invalid_argument("unknown parameter: " + name);
}

PosteriorDraws run_nuts(const LogDensityGradient& target, std::size_t dim,
                        const SamplerConfig& config,
                        std::vector<std::string> names,
                        const std::vector<double>* initial) {
  if (config.chains < 1 || config.warmup < 20 ||
      config.iterations <= config.warmup) {
    throw std::invalid_argument("invalid sampler configuration");
  }
  SamplerConfig cfg = config;
  // Short warmups cannot host the default 75/25/50 buffers; shrink them
  // proportionally (15% / 10% of warmup, remainder for the slow windows).
  if (cfg.init_buffer + cfg.base_window + cfg.term_buffer > cfg.warmup) {
    cfg.init_buffer = static_cast<int>(0.15 * cfg.warmup);
    cfg.term_buffer = static_cast<int>(0.10 * cfg.warmup);
    cfg.base_window = cfg.warmup - cfg.init_buffer - cfg.term_buffer;
  }
  PosteriorDraws out;
  out.dim = dim;
  out.kept_per_chain = config.kept_per_chain();
  if (names.empty()) {
    for (std::size_t i = 0; i < dim; ++i) {
      names.push_back("theta_" + std::to_string(i));
    }
  }
  if (names.size() != dim) {
    throw std::invalid_argument("parameter name count does not match dim");
  }
  out.names = std::move(names);
  out.chains.reserve(cfg.chains);
  for (int c = 0; c < cfg.chains; ++c) {
    NutsChain chain(target, dim, cfg, c, initial);
    out.chains.push_back(chain.run());
  }
  return out;
}

void write_draws_csv(const std::string& path, const PosteriorDraws& draws) {
  CsvWriter out(path);
  std::vector<std::string> header = {"chain", "draw", "lp__", "divergent__",
                                     "treedepth__"};
  header.insert(header.end(), draws.names.begin(), draws.names.end());
  out.write_row(header);
  std::vector<std::string> row;
  for (std::size_t c = 0; c < draws.num_chains(); ++c) {
    const ChainResult& chain = draws.chains[c];
    for (int d = 0; d < draws.kept_per_chain; ++d) {
      row.clear();
      row.push_back(std::to_string(c + 1));
      row.push_back(std::to_string(d + 1));
      row.push_back(format_double(chain.lp[d]));
      row.push_back(std::to_string(static_cast<int>(chain.divergent[d])));
      row.push_back(std::to_string(chain.treedepth[d]));
      for (std::size_t p = 0; p < draws.dim; ++p) {
        row.push_back(format_double(draws.value(c, d, p)));
      }
      out.write_row(row);
    }
  }
}

PosteriorDraws read_draws_csv(const std::string& path) {
  CsvReader reader(path);
  const auto& header = reader.header();
  constexpr std::size_t kFixed = 5;  // chain, draw, lp__, divergent__, treedepth__
  if (header.size() < kFixed + 1 || header[0] != "chain" ||
      header[1] != "draw" || header[2] != "lp__" ||
      header[3] != "divergent__" || header[4] != "treedepth__") {
    throw SchemaError(path + ": not a turnmix draws file");
  }
  PosteriorDraws out;
  out.dim = header.size() - kFixed;
  out.names.assign(header.begin() + kFixed, header.end());

  std::vector<std::string> fields;
  int last_chain = 0;
  while (reader.next(fields)) {
    const auto chain = parse_int(fields[0]);
    const auto lp = parse_double(fields[2]);
    const auto div = parse_int(fields[3]);
    const auto depth = parse_int(fields[4]);
    if (!chain || !lp || !div || !depth) {
      throw SchemaError(path + ":" + std::to_string(reader.line()) +
                        ": bad draws row");
    }
    if (*chain == last_chain + 1) {
      out.chains.emplace_back();
      ++last_chain;
    } else if (*chain != last_chain) {
      throw SchemaError(path + ": chain numbers must be contiguous from 1");
    }
    ChainResult& c = out.chains.back();
    for (std::size_t p = 0; p < out.dim; ++p) {
      const auto v = parse_double(fields[kFixed + p]);
      if (!v) {
        throw SchemaError(path + ":" + std::to_string(reader.line()) +
                          ": bad parameter value");
      }
      c.draws.push_back(*v);
    }
    c.lp.push_back(*lp);
    c.treedepth.push_back(static_cast<int>(*depth));
    c.divergent.push_back(*div != 0 ? 1 : 0);
    if (*div != 0) ++c.divergences;
  }
  if (out.chains.empty()) throw SchemaError(path + ": no draws");
  out.kept_per_chain = static_cast<int>(out.chains.front().lp.size());
  for (const auto& c : out.chains) {
    if (static_cast<int>(c.lp.size()) != out.kept_per_chain) {
      throw SchemaError(path + ": chains have unequal draw counts");
    }
  }
  return out;
}

void write_run_manifest(const std::string& path, const PosteriorDraws& draws,
                        const SamplerConfig& config) {
  nlohmann::json j;
  j["sampler"] = {{"chains", config.chains},
                  {"iterations", config.iterations},
                  {"warmup", config.warmup},
                  {"target_accept", config.target_accept},
                  {"max_treedepth", config.max_treedepth},
                  {"seed", config.seed}};
  j["kept_per_chain"] = draws.kept_per_chain;
  j["total_divergences"] = draws.total_divergences();
  nlohmann::json chains = nlohmann::json::array();
  for (std::size_t c = 0; c < draws.num_chains(); ++c) {
    const ChainResult& chain = draws.chains[c];
    std::vector<int> depth_hist(config.max_treedepth + 1, 0);
    for (int d : chain.treedepth) {
      depth_hist[std::min<std::size_t>(d, depth_hist.size() - 1)]++;
    }
    chains.push_back({{"chain", c + 1},
                      {"step_size", chain.step_size},
                      {"divergences", chain.divergences},
                      {"warmup_divergences", chain.warmup_divergences},
                      {"max_depth_hits", chain.max_depth_hits},
                      {"seconds", chain.seconds},
                      {"treedepth_counts", depth_hist},
                      {"inv_mass", chain.inv_mass}});
  }
  j["chains"] = std::move(chains);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace turnmix
