// Acceptance gate. Runs exactly one criterion per invocation (argv[1] in
// 1..8), prints a single verdict line
//
//   ACCEPTANCE <n> PASS|FAIL|SKIP <measured values>
//
// and exits 0 on pass, 1 on fail, 77 on skip (criterion 7 without data).
// Statistical criteria use fixed seeds chosen up front; they are never
// re-rolled to flip a verdict.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <sys/wait.h>

#include "turnmix/angles.hpp"
#include "turnmix/diagnostics.hpp"
#include "turnmix/features.hpp"
#include "turnmix/model.hpp"
#include "turnmix/posterior.hpp"
#include "turnmix/rng.hpp"
#include "turnmix/sampler.hpp"
#include "turnmix/simulate.hpp"
#include "turnmix/tracking.hpp"
#include "turnmix/von_mises.hpp"

#ifndef TURNMIX_BIN
#define TURNMIX_BIN "turnmix"
#endif

namespace {

using namespace turnmix;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: turn-angle series vs a long-double brute-force oracle, plus
// rotation/translation invariance, on 1,000 random 10-point paths.
// ---------------------------------------------------------------------------

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

long double wrap_l(long double a) {
  long double r = std::fmod(a + kPiL, 2.0L * kPiL);
  if (r <= 0.0L) r += 2.0L * kPiL;
  return r - kPiL;
}

std::vector<double> oracle_turn_series(const std::vector<Point2>& path) {
  std::vector<long double> bearings;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    bearings.push_back(std::atan2(
        static_cast<long double>(path[i + 1].y) - path[i].y,
        static_cast<long double>(path[i + 1].x) - path[i].x));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < bearings.size(); ++i) {
    out.push_back(static_cast<double>(wrap_l(bearings[i + 1] - bearings[i])));
  }
  return out;
}

Verdict criterion_1() {
  const auto start = Clock::now();
  Rng rng(20250801);
  double max_err = 0.0;
  double max_inv_err = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<Point2> path;
    path.push_back({rng.uniform(0.0, 120.0), rng.uniform(0.0, 53.3)});
    while (path.size() < 10) {
      Point2 p{rng.uniform(0.0, 120.0), rng.uniform(0.0, 53.3)};
      const double dx = p.x - path.back().x;
      const double dy = p.y - path.back().y;
      if (std::hypot(dx, dy) < 1e-3) continue;  // keep steps non-degenerate
      path.push_back(p);
    }

    const std::vector<double> got = turn_angle_series(path);
    const std::vector<double> want = oracle_turn_series(path);
    if (got.size() != want.size() || got.size() != 8) {
      return {false, "series length " + std::to_string(got.size()) +
                         " (expected 8)"};
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      max_err = std::max(max_err, std::abs(got[i] - want[i]));
    }

    const double theta = rng.uniform(-kPi, kPi);
    const double tx = rng.uniform(-50.0, 50.0);
    const double ty = rng.uniform(-50.0, 50.0);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<Point2> moved;
    moved.reserve(path.size());
    for (const Point2& p : path) {
      moved.push_back({c * p.x - s * p.y + tx, s * p.x + c * p.y + ty});
    }
    const std::vector<double> transformed = turn_angle_series(moved);
    for (std::size_t i = 0; i < got.size(); ++i) {
      max_inv_err = std::max(max_inv_err,
                             std::abs(wrap_angle(transformed[i] - got[i])));
    }
  }
  const double elapsed = seconds_since(start);
  const bool pass = max_err <= 1e-10 && max_inv_err <= 1e-10 && elapsed < 1.0;
  return {pass, "max_abs_err=" + fmt(max_err, 3) +
                    " (tol 1e-10), max_invariance_err=" + fmt(max_inv_err, 3) +
                    " (tol 1e-10), elapsed_s=" + fmt(elapsed, 3) +
                    " (limit 1)"};
}

// ---------------------------------------------------------------------------
// Criterion 2: density normalization by quadrature, log I0 vs a long-double
// series, and full-posterior gradients vs central finite differences.
// ---------------------------------------------------------------------------

double simpson_vm_mass(double mu, double kappa) {
  const int n = 1 << 17;  // even interval count
  const double h = kTwoPi / n;
  const VonMisesParams p{mu, kappa};
  auto f = [&](double x) { return std::exp(vm_log_density(x, p)); };
  double sum = f(-kPi) + f(kPi);
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; ++i) {
    const double x = -kPi + h * i;
    ((i & 1) ? odd : even) += f(x);
  }
  return (sum + 4.0 * odd + 2.0 * even) * h / 3.0;
}

long double log_i0_reference(long double x) {
  const long double q = x * x / 4.0L;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 4000; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (term < sum * 1e-26L) break;
  }
  return std::log(sum);
}

std::vector<ModelFrame> random_instance_frames(int rows, int players_per_pos,
                                               Rng& rng) {
  std::vector<ModelFrame> frames;
  frames.reserve(rows);
  for (int i = 0; i < rows; ++i) {
    ModelFrame f;
    const int pos = i % 3;
    f.position = pos == 0 ? Position::RB : pos == 1 ? Position::TE
                                                    : Position::WR;
    f.player_id = 100 * (pos + 1) + (i / 3) % players_per_pos;
    f.game_id = 1;
    f.play_id = 1 + i / 10;
    f.frame_id = i + 1;
    f.phi = rng.uniform(-2.5, 2.5);
    for (double& v : f.x) v = rng.uniform(-1.5, 1.5);
    f.z[0] = rng.uniform(0.3, 2.0);   // speed
    f.z[1] = rng.uniform(-1.0, 1.0);  // accel
    f.z[2] = rng.uniform(0.0, 3.0);   // cumulative distance
    f.z[3] = (pos == 0 && i % 2 == 0) ? 1.0 : 0.0;
    f.z[4] = pos == 1 ? 1.0 : 0.0;
    f.z[5] = pos == 2 ? 1.0 : 0.0;
    frames.push_back(f);
  }
  return frames;
}

Verdict criterion_2() {
  const auto start = Clock::now();

  double max_mass_err = 0.0;
  for (double kappa : {0.0, 0.5, 1.0, 5.0, 50.0}) {
    for (double mu : {0.0, 1.25, -2.5}) {
      max_mass_err =
          std::max(max_mass_err, std::abs(simpson_vm_mass(mu, kappa) - 1.0));
    }
  }

  double max_i0_rel = 0.0;
  for (int i = 0; i <= 3000; ++i) {
    const double kappa = 0.01 * i;  // 0 .. 30
    const long double ref = log_i0_reference(kappa);
    const double got = log_bessel_i0(kappa);
    const long double denom = std::max(std::abs(ref), 1e-15L);
    max_i0_rel = std::max(
        max_i0_rel, static_cast<double>(std::abs(got - ref) / denom));
  }

  double max_grad_rel = 0.0;
  Rng rng(20250802);
  for (int inst = 0; inst < 20; ++inst) {
    const auto frames = random_instance_frames(42, 2, rng);
    TurnModel model(make_dataset(frames));
    const std::size_t dim = model.dim();
    std::vector<double> theta(dim);
    for (double& v : theta) v = rng.uniform(-0.4, 0.4);
    for (std::size_t s = 0; s < TurnModel::kNumSigmas; ++s) {
      theta[model.log_sigma_offset() + s] = rng.uniform(-0.6, 0.2);
    }
    std::vector<double> grad(dim);
    model.log_posterior(theta, grad);
    const double h = 1e-5;
    for (std::size_t d = 0; d < dim; ++d) {
      std::vector<double> up = theta, dn = theta;
      up[d] += h;
      dn[d] -= h;
      const double fd = (model.log_posterior_value(up) -
                         model.log_posterior_value(dn)) /
                        (2.0 * h);
      const double rel = std::abs(grad[d] - fd) /
                         std::max({1.0, std::abs(grad[d]), std::abs(fd)});
      max_grad_rel = std::max(max_grad_rel, rel);
    }
  }

  const double elapsed = seconds_since(start);
  const bool pass = max_mass_err <= 1e-8 && max_i0_rel <= 1e-12 &&
                    max_grad_rel <= 1e-6 && elapsed < 30.0;
  return {pass, "max_mass_err=" + fmt(max_mass_err, 3) +
                    " (tol 1e-8), max_logI0_rel=" + fmt(max_i0_rel, 3) +
                    " (tol 1e-12), max_grad_rel=" + fmt(max_grad_rel, 3) +
                    " (tol 1e-6), elapsed_s=" + fmt(elapsed, 3) +
                    " (limit 30)"};
}

// ---------------------------------------------------------------------------
// Criterion 3: sampler validation on a 10-dimensional standard normal.
// ---------------------------------------------------------------------------

Verdict criterion_3() {
  const auto start = Clock::now();
  const std::size_t dim = 10;
  LogDensityGradient target = [](std::span<const double> q,
                                 std::span<double> g) {
    double lp = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      lp -= 0.5 * q[i] * q[i];
      g[i] = -q[i];
    }
    return lp;
  };
  SamplerConfig cfg;
  cfg.chains = 4;
  cfg.iterations = 3000;  // 2000 kept per chain
  cfg.warmup = 1000;
  cfg.seed = 20250803;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim; ++i) names.push_back("q" + std::to_string(i));
  const PosteriorDraws draws = run_nuts(target, dim, cfg, names);
  const auto diag = diagnose_draws(draws);

  double worst_mean_z = 0.0, min_var = 1e300, max_var = 0.0;
  double max_rhat = 0.0, min_ess = 1e300;
  for (std::size_t d = 0; d < dim; ++d) {
    const std::vector<double> pooled = draws.pooled(d);
    const double n = static_cast<double>(pooled.size());
    double mean = 0.0;
    for (double v : pooled) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : pooled) var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    const double sd = std::sqrt(var);
    const double ess = diag[d].ess;
    worst_mean_z =
        std::max(worst_mean_z, std::abs(mean) / (sd / std::sqrt(ess)));
    min_var = std::min(min_var, var);
    max_var = std::max(max_var, var);
    max_rhat = std::max(max_rhat, diag[d].rhat);
    min_ess = std::min(min_ess, ess);
  }
  const double elapsed = seconds_since(start);
  const bool pass = worst_mean_z <= 4.0 && min_var >= 0.9 && max_var <= 1.1 &&
                    max_rhat < 1.01 && min_ess > 400.0 && elapsed < 120.0;
  return {pass, "worst_mean_z=" + fmt(worst_mean_z, 3) +
                    " (tol 4), var_range=[" + fmt(min_var, 4) + "," +
                    fmt(max_var, 4) + "] (tol [0.9,1.1]), max_rhat=" +
                    fmt(max_rhat, 5) + " (tol 1.01), min_ess=" +
                    fmt(min_ess, 4) + " (tol 400), elapsed_s=" +
                    fmt(elapsed, 3) + " (limit 120)"};
}

// ---------------------------------------------------------------------------
// Shared recovery-fit recipe for criteria 4-6 (matches the CLI fit stage:
// target_accept 0.9, init_radius 0.1).
// ---------------------------------------------------------------------------

struct RecoveryFit {
  PosteriorDraws draws;
  ModelDataset data;
  double seconds = 0.0;
};

RecoveryFit fit_simulated(const SimulatedData& sim, std::uint64_t seed,
                          int chains = 4, int iterations = 1500,
                          int warmup = 500) {
  const auto start = Clock::now();
  TurnModel model(make_dataset(sim.frames));
  SamplerConfig cfg;
  cfg.chains = chains;
  cfg.iterations = iterations;
  cfg.warmup = warmup;
  cfg.seed = seed;
  cfg.target_accept = 0.9;
  cfg.init_radius = 0.1;
  LogDensityGradient target = [&model](std::span<const double> q,
                                       std::span<double> g) {
    return model.log_posterior(q, g);
  };
  PosteriorDraws draws =
      run_nuts(target, model.dim(), cfg, model.parameter_names());
  return {std::move(draws), model.data(), seconds_since(start)};
}

std::vector<std::pair<std::string, double>> fixed_effect_truths(
    const TrueParams& t) {
  std::vector<std::pair<std::string, double>> out;
  out.emplace_back("alpha0", t.alpha0);
  for (std::size_t k = 0; k < kMeanCovariates; ++k) {
    out.emplace_back("beta_" + mean_covariate_names()[k], t.beta[k]);
  }
  out.emplace_back("gamma0", t.gamma0);
  for (std::size_t k = 0; k < kConcCovariates; ++k) {
    out.emplace_back("psi_" + conc_covariate_names()[k], t.psi[k]);
  }
  return out;
}

Verdict criterion_4() {
  const TrueParams truth = default_truth();
  const auto fixed = fixed_effect_truths(truth);
  std::map<std::string, int> covered;
  for (const auto& [name, value] : fixed) covered[name] = 0;

  bool signs_ok = true;
  double max_rhat = 0.0;
  long long total_kept = 0, total_div = 0;
  double max_seconds = 0.0;

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    SimulateConfig sc;
    sc.players_per_position = {20, 20, 20};
    sc.rows_per_player = 200;
    sc.seed = seed;
    const SimulatedData sim = simulate_dataset(truth, sc);
    const RecoveryFit fit = fit_simulated(sim, seed);
    max_seconds = std::max(max_seconds, fit.seconds);

    const PosteriorSummary summary(fit.draws, fit.data);
    for (const auto& [name, value] : fixed) {
      const SummaryRow r = summary.row(name);
      if (r.q025 <= value && value <= r.q975) ++covered[name];
    }
    if (!(summary.row("psi_speed").mean > 0.0 &&
          summary.row("psi_accel").mean < 0.0)) {
      signs_ok = false;
    }
    for (const auto& d : diagnose_draws(fit.draws)) {
      max_rhat = std::max(max_rhat, d.rhat);
    }
    total_kept += static_cast<long long>(fit.draws.num_chains()) *
                  fit.draws.kept_per_chain;
    total_div += fit.draws.total_divergences();
    std::cerr << "[criterion 4] seed " << seed << ": fit "
              << fmt(fit.seconds, 4) << "s, divergences "
              << fit.draws.total_divergences() << "\n";
  }

  int min_cover = 6;
  std::string worst_name = "-";
  for (const auto& [name, count] : covered) {
    if (count < min_cover) {
      min_cover = count;
      worst_name = name;
    }
  }
  const double clean_rate =
      1.0 - static_cast<double>(total_div) / static_cast<double>(total_kept);
  const bool pass =
      min_cover >= 5 && signs_ok && max_rhat < 1.01 && clean_rate >= 0.999;
  return {pass, "min_coverage=" + std::to_string(min_cover) + "/6 (" +
                    worst_name + ", tol 5/6), signs_ok=" +
                    (signs_ok ? "yes" : "no") + ", max_rhat=" +
                    fmt(max_rhat, 5) + " (tol 1.01), clean_draw_rate=" +
                    fmt(clean_rate, 6) + " (tol 0.999), max_fit_s=" +
                    fmt(max_seconds, 4) + " (target 1200)"};
}

// ---------------------------------------------------------------------------
// Criterion 5: Spearman correlation between posterior-mean player effects
// and the simulated truth, per position.
// ---------------------------------------------------------------------------

std::vector<double> ranks_of(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    r[order[i]] = static_cast<double>(i + 1);
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const std::vector<double> ra = ranks_of(a), rb = ranks_of(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

Verdict criterion_5() {
  const TrueParams truth = default_truth();
  SimulateConfig sc;
  sc.players_per_position = {30, 30, 30};
  sc.rows_per_player = 300;
  sc.seed = 1;
  const SimulatedData sim = simulate_dataset(truth, sc);
  const RecoveryFit fit = fit_simulated(sim, sc.seed);
  const PosteriorSummary summary(fit.draws, fit.data);

  std::array<std::vector<double>, 3> est, tru;
  for (std::size_t j = 0; j < fit.data.players.size(); ++j) {
    const std::vector<double> draws = summary.centered_player_draws(j);
    double mean = 0.0;
    for (double v : draws) mean += v;
    mean /= static_cast<double>(draws.size());
    const int s = fit.data.sigma_index[j];
    est[s].push_back(mean);
    tru[s].push_back(sim.u[j]);
  }
  const double rb = spearman(est[0], tru[0]);
  const double te = spearman(est[1], tru[1]);
  const double wr = spearman(est[2], tru[2]);
  const bool pass = rb > 0.8 && te > 0.8 && wr > 0.8;
  return {pass, "spearman_rb=" + fmt(rb, 4) + ", spearman_te=" + fmt(te, 4) +
                    ", spearman_wr=" + fmt(wr, 4) +
                    " (tol > 0.8 each), fit_s=" + fmt(fit.seconds, 4)};
}

// ---------------------------------------------------------------------------
// Criterion 6: calibration of psi_speed -- across 20 replicates the rank of
// the truth within the pooled posterior draws is extreme (outer two-sided
// 5%) in at most 2 replicates.
// ---------------------------------------------------------------------------

Verdict criterion_6() {
  const TrueParams truth = default_truth();
  int extreme = 0;
  std::ostringstream ranks;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulateConfig sc;
    sc.players_per_position = {20, 20, 20};
    sc.rows_per_player = 200;
    sc.seed = seed;
    const SimulatedData sim = simulate_dataset(truth, sc);
    const RecoveryFit fit = fit_simulated(sim, seed);
    const std::vector<double> pooled =
        fit.draws.pooled(fit.draws.param_index("psi_speed"));
    double below = 0.0;
    for (double v : pooled) {
      if (v < truth.psi[0]) below += 1.0;
      else if (v == truth.psi[0]) below += 0.5;
    }
    const double rank = below / static_cast<double>(pooled.size());
    if (rank < 0.025 || rank > 0.975) ++extreme;
    ranks << (seed == 1 ? "" : ",") << fmt(rank, 2);
    std::cerr << "[criterion 6] seed " << seed << ": rank " << fmt(rank, 3)
              << ", fit " << fmt(fit.seconds, 4) << "s\n";
  }
  const bool pass = extreme <= 2;
  return {pass, "extreme_ranks=" + std::to_string(extreme) +
                    "/20 (tol <= 2), ranks=[" + ranks.str() + "]"};
}

// ---------------------------------------------------------------------------
// Criterion 7: full-corpus ingest counts (skipped without TURNMIX_BDB_DIR).
// ---------------------------------------------------------------------------

bool within_pct(long long actual, long long expected, double pct) {
  return std::abs(actual - expected) <=
         pct * static_cast<double>(expected);
}

int criterion_7() {
  const char* dir = std::getenv("TURNMIX_BDB_DIR");
  if (dir == nullptr || *dir == '\0') {
    std::cout << "ACCEPTANCE 7 SKIP TURNMIX_BDB_DIR not set; full-corpus "
                 "ingest not checked\n";
    return 77;
  }
  const fs::path root(dir);
  DatasetPaths paths;
  for (int week = 1; week <= 9; ++week) {
    const fs::path p =
        root / ("tracking_week_" + std::to_string(week) + ".csv");
    if (fs::exists(p)) paths.tracking.push_back(p.string());
  }
  paths.plays = (root / "plays.csv").string();
  paths.players = (root / "players.csv").string();
  paths.player_play = (root / "player_play.csv").string();

  RawDataset raw = load_dataset(paths);
  standardize_play_direction(raw);
  const std::vector<CarrierSequence> seqs = extract_carrier_sequences(raw);

  long long total = static_cast<long long>(seqs.size());
  long long rushes = 0, wr_pass = 0, rb_pass = 0, te_pass = 0;
  for (const CarrierSequence& s : seqs) {
    if (s.meta.type == PlayMeta::Type::Run) {
      ++rushes;
    } else if (s.meta.type == PlayMeta::Type::Pass) {
      if (s.position == Position::WR) ++wr_pass;
      if (s.position == Position::RB) ++rb_pass;
      if (s.position == Position::TE) ++te_pass;
    }
  }
  const bool pass = within_pct(total, 9480, 0.01) &&
                    within_pct(rushes, 5431, 0.01) &&
                    within_pct(wr_pass, 2074, 0.01) &&
                    within_pct(rb_pass, 1061, 0.01) &&
                    within_pct(te_pass, 914, 0.01);
  const bool exact = total == 9480 && rushes == 5431 && wr_pass == 2074 &&
                     rb_pass == 1061 && te_pass == 914;
  std::cout << "ACCEPTANCE 7 " << (pass ? "PASS" : "FAIL") << " sequences="
            << total << "/9480, rushes=" << rushes << "/5431, wr_pass="
            << wr_pass << "/2074, rb_pass=" << rb_pass << "/1061, te_pass="
            << te_pass << "/914 (tol 1%), exact_match="
            << (exact ? "yes" : "no") << "\n";
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Criterion 8: the packaged binary's recover pipeline is bit-reproducible.
// ---------------------------------------------------------------------------

std::string slurp_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_command(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Verdict criterion_8() {
  const fs::path base = fs::temp_directory_path() / "turnmix_acceptance_8";
  fs::remove_all(base);
  fs::create_directories(base / "a");
  fs::create_directories(base / "b");
  const std::string args =
      " recover --players 2,1,1 --rows 40 --chains 2 --iterations 100"
      " --warmup 50 --seed 424242 -o ";
  for (const char* leaf : {"a", "b"}) {
    const std::string cmd = std::string(TURNMIX_BIN) + args +
                            (base / leaf).string() + " > " +
                            (base / (std::string(leaf) + ".log")).string() +
                            " 2>&1";
    const int rc = run_command(cmd);
    if (rc != 0) {
      return {false, std::string("recover run '") + leaf +
                         "' exited with code " + std::to_string(rc)};
    }
  }
  const std::string a = slurp_bytes(base / "a" / "draws.csv");
  const std::string b = slurp_bytes(base / "b" / "draws.csv");
  if (a.empty() || b.empty()) {
    return {false, "draws.csv missing or empty"};
  }
  const bool draws_equal = a == b;
  const bool report_equal =
      slurp_bytes(base / "a" / "recovery_report.csv") ==
      slurp_bytes(base / "b" / "recovery_report.csv");
  return {draws_equal, std::string("draws_identical=") +
                           (draws_equal ? "yes" : "no") + " (" +
                           std::to_string(a.size()) +
                           " bytes), recovery_report_identical=" +
                           (report_equal ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: turnmix_acceptance <criterion 1-8>\n";
    return 2;
  }
  const int which = std::atoi(argv[1]);
  if (which == 7) return criterion_7();

  Verdict v;
  switch (which) {
    case 1: v = criterion_1(); break;
    case 2: v = criterion_2(); break;
    case 3: v = criterion_3(); break;
    case 4: v = criterion_4(); break;
    case 5: v = criterion_5(); break;
    case 6: v = criterion_6(); break;
    case 8: v = criterion_8(); break;
    default:
      std::cerr << "usage: turnmix_acceptance <criterion 1-8>\n";
      return 2;
  }
  std::cout << "ACCEPTANCE " << which << " " << (v.pass ? "PASS" : "FAIL")
            << " " << v.detail << "\n";
  return v.pass ? 0 : 1;
}
