#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace turnmix {

// Log density (up to a constant) together with its gradient, written into
// `gradient` (same length as `position`). Returns -inf for out-of-support.
using LogDensityGradient =
    std::function<double(std::span<const double> position,
                         std::span<double> gradient)>;

struct SamplerConfig {
  int chains = 4;
  int iterations = 3500;  // total per chain, warmup included
  int warmup = 1500;
  double target_accept = 0.8;
  int max_treedepth = 10;
  std::uint64_t seed = 1;
  double init_radius = 2.0;
  // Warmup schedule (Stan-style windowed adaptation).
  int init_buffer = 75;
  int term_buffer = 50;
  int base_window = 25;
  // Dual-averaging constants.
  double adapt_gamma = 0.05;
  double adapt_t0 = 10.0;
  double adapt_kappa = 0.75;
  double divergence_threshold = 1000.0;

  int kept_per_chain() const { return iterations - warmup; }
};

struct ChainResult {
  std::vector<double> draws;       // kept_per_chain * dim, row-major
  std::vector<double> lp;          // kept_per_chain
  std::vector<int> treedepth;      // kept_per_chain
  std::vector<char> divergent;     // kept_per_chain (post-warmup flags)
  int divergences = 0;             // post-warmup count
  int warmup_divergences = 0;
  int max_depth_hits = 0;          // post-warmup
  double step_size = 0.0;          // final adapted step size
  std::vector<double> inv_mass;    // final diagonal inverse metric
  double seconds = 0.0;
};

struct PosteriorDraws {
  std::vector<std::string> names;  // parameter names, length dim
  std::size_t dim = 0;
  int kept_per_chain = 0;
  std::vector<ChainResult> chains;

  std::size_t num_chains() const { return chains.size(); }
  double value(std::size_t chain, int draw, std::size_t param) const {
    return chains[chain].draws[static_cast<std::size_t>(draw) * dim + param];
  }
  // All kept draws of one parameter from one chain.
  std::vector<double> column(std::size_t chain, std::size_t param) const;
  // Pooled draws of one parameter across all chains, chain-major.
  std::vector<double> pooled(std::size_t param) const;
  int total_divergences() const;
  std::size_t param_index(const std::string& name) const;  // throws if absent
};

// Multinomial no-U-turn sampler with dual-averaging step size adaptation and
// windowed diagonal metric adaptation. Chains run sequentially; chain c uses
// the RNG substream (seed, c), so results are independent of scheduling.
PosteriorDraws run_nuts(const LogDensityGradient& target, std::size_t dim,
                        const SamplerConfig& config,
                        std::vector<std::string> names = {},
                        const std::vector<double>* initial = nullptr);

void write_draws_csv(const std::string& path, const PosteriorDraws& draws);
PosteriorDraws read_draws_csv(const std::string& path);
void write_run_manifest(const std::string& path, const PosteriorDraws& draws,
                        const SamplerConfig& config);

}  // namespace turnmix
