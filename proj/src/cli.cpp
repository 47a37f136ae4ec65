#include "turnmix/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "turnmix/csv.hpp"
#include "turnmix/diagnostics.hpp"
#include "turnmix/features.hpp"
#include "turnmix/model.hpp"
#include "turnmix/posterior.hpp"
#include "turnmix/sampler.hpp"
#include "turnmix/simulate.hpp"
#include "turnmix/tracking.hpp"

namespace turnmix {

namespace {

namespace fs = std::filesystem;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path) {
  if (!fs::is_regular_file(path)) {
    throw ValidationError("input file not found: " + path);
  }
}

std::string prepare_out_dir(std::string dir) {
  if (dir.empty()) {
    if (const char* env = std::getenv("TURNMIX_OUT")) dir = env;
  }
  if (dir.empty()) {
    throw ValidationError("no output directory (use -o or set TURNMIX_OUT)");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ValidationError("cannot create output directory: " + dir);
  }
  return dir;
}

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  require_file(path);
  std::ifstream in(path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad config file " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config must be a JSON object");
  return cfg;
}

// Config-file values fill in anything not set on the command line.
template <typename T>
void fill_from_config(const nlohmann::json& cfg, const char* key,
                      const CLI::Option* opt, T& value) {
  if (opt->count() > 0 || !cfg.contains(key)) return;
  try {
    value = cfg.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("bad config value for '") + key + "'");
  }
}

// Shared flag bundles -----------------------------------------------------

struct IngestArgs {
  std::vector<std::string> tracking;
  std::string plays, players, player_play;
};

struct IngestOptions {
  CLI::Option* tracking;
  CLI::Option* plays;
  CLI::Option* players;
  CLI::Option* player_play;
};

IngestOptions add_ingest_options(CLI::App* cmd, IngestArgs& args) {
  IngestOptions opts;
  opts.tracking = cmd->add_option("--tracking", args.tracking,
                                  "Tracking CSV file(s), repeatable");
  opts.plays = cmd->add_option("--plays", args.plays, "plays.csv path");
  opts.players = cmd->add_option("--players", args.players, "players.csv path");
  opts.player_play =
      cmd->add_option("--player-play", args.player_play, "player_play.csv path");
  return opts;
}

void fill_ingest_from_config(const nlohmann::json& cfg,
                             const IngestOptions& opts, IngestArgs& args) {
  fill_from_config(cfg, "tracking", opts.tracking, args.tracking);
  fill_from_config(cfg, "plays", opts.plays, args.plays);
  fill_from_config(cfg, "players", opts.players, args.players);
  fill_from_config(cfg, "player_play", opts.player_play, args.player_play);
}

void validate_ingest_args(const IngestArgs& args) {
  if (args.tracking.empty()) throw ValidationError("--tracking is required");
  for (const auto& t : args.tracking) require_file(t);
  if (args.plays.empty()) throw ValidationError("--plays is required");
  require_file(args.plays);
  if (args.players.empty()) throw ValidationError("--players is required");
  require_file(args.players);
  if (args.player_play.empty()) {
    throw ValidationError("--player-play is required");
  }
  require_file(args.player_play);
}

struct SamplerArgs {
  SamplerArgs() {
    // Fits of the hierarchical model favor a conservative step size; the
    // tighter acceptance target trades a little speed for far fewer
    // divergences than the generic library default.
    config.target_accept = 0.9;
  }

  SamplerConfig config;
  double fixed_effect_sd = PriorConfig{}.fixed_effect_sd;
  double sigma_scale = PriorConfig{}.sigma_scale;
};

struct SamplerOptions {
  CLI::Option *chains, *iterations, *warmup, *target_accept, *max_treedepth,
      *seed, *fixed_effect_sd, *sigma_scale;
};

SamplerOptions add_sampler_options(CLI::App* cmd, SamplerArgs& args) {
  SamplerOptions o;
  o.chains = cmd->add_option("--chains", args.config.chains, "MCMC chains");
  o.iterations = cmd->add_option("--iter,--iterations", args.config.iterations,
                                 "Total iterations per chain");
  o.warmup = cmd->add_option("--warmup", args.config.warmup,
                             "Warmup iterations per chain");
  o.target_accept = cmd->add_option("--target-accept", args.config.target_accept,
                                    "Dual-averaging target acceptance");
  o.max_treedepth = cmd->add_option("--max-treedepth",
                                    args.config.max_treedepth, "NUTS max depth");
  o.seed = cmd->add_option("--seed", args.config.seed, "RNG seed");
  o.fixed_effect_sd = cmd->add_option("--fixed-effect-sd", args.fixed_effect_sd,
                                      "Normal prior sd for fixed effects");
  o.sigma_scale = cmd->add_option("--sigma-scale", args.sigma_scale,
                                  "half-t scale for sigma priors");
  return o;
}

void fill_sampler_from_config(const nlohmann::json& cfg,
                              const SamplerOptions& o, SamplerArgs& args) {
  fill_from_config(cfg, "chains", o.chains, args.config.chains);
  fill_from_config(cfg, "iterations", o.iterations, args.config.iterations);
  fill_from_config(cfg, "warmup", o.warmup, args.config.warmup);
  fill_from_config(cfg, "target_accept", o.target_accept,
                   args.config.target_accept);
  fill_from_config(cfg, "max_treedepth", o.max_treedepth,
                   args.config.max_treedepth);
  fill_from_config(cfg, "seed", o.seed, args.config.seed);
  fill_from_config(cfg, "fixed_effect_sd", o.fixed_effect_sd,
                   args.fixed_effect_sd);
  fill_from_config(cfg, "sigma_scale", o.sigma_scale, args.sigma_scale);
}

void validate_sampler_args(const SamplerArgs& args) {
  const auto& c = args.config;
  if (c.chains < 1) throw ValidationError("--chains must be >= 1");
  if (c.warmup < 20 || c.iterations <= c.warmup) {
    throw ValidationError("need iterations > warmup >= 20");
  }
  if (!(c.target_accept > 0.0 && c.target_accept < 1.0)) {
    throw ValidationError("--target-accept must be in (0, 1)");
  }
  if (c.max_treedepth < 1 || c.max_treedepth > 14) {
    throw ValidationError("--max-treedepth must be in [1, 14]");
  }
  if (!(args.fixed_effect_sd > 0.0) || !(args.sigma_scale > 0.0)) {
    throw ValidationError("prior scales must be positive");
  }
}

struct SimArgs {
  std::string truth = "default";
  std::vector<int> players = {20, 20, 20};
  int rows = 200;
  int rows_per_play = 20;
};

struct SimOptions {
  CLI::Option *truth, *players, *rows, *rows_per_play;
};

SimOptions add_sim_options(CLI::App* cmd, SimArgs& args) {
  SimOptions o;
  o.truth = cmd->add_option("--truth", args.truth,
                            "Truth preset (only 'default')");
  o.players = cmd->add_option("--players", args.players,
                              "Players per position RB,TE,WR")
                  ->delimiter(',')
                  ->expected(3);
  o.rows = cmd->add_option("--rows", args.rows, "Rows per player");
  o.rows_per_play =
      cmd->add_option("--rows-per-play", args.rows_per_play, "Rows per play");
  return o;
}

void fill_sim_from_config(const nlohmann::json& cfg, const SimOptions& o,
                          SimArgs& args) {
  fill_from_config(cfg, "truth", o.truth, args.truth);
  fill_from_config(cfg, "players", o.players, args.players);
  fill_from_config(cfg, "rows", o.rows, args.rows);
  fill_from_config(cfg, "rows_per_play", o.rows_per_play, args.rows_per_play);
}

SimulateConfig make_sim_config(const SimArgs& args, std::uint64_t seed) {
  if (args.truth != "default") {
    throw ValidationError("unknown --truth preset: " + args.truth);
  }
  if (args.players.size() != 3) {
    throw ValidationError("--players needs exactly RB,TE,WR counts");
  }
  for (int p : args.players) {
    if (p < 0) throw ValidationError("player counts must be >= 0");
  }
  if (args.rows < 1 || args.rows_per_play < 1) {
    throw ValidationError("row counts must be positive");
  }
  SimulateConfig cfg;
  cfg.players_per_position = {args.players[0], args.players[1],
                              args.players[2]};
  cfg.rows_per_player = args.rows;
  cfg.rows_per_play = args.rows_per_play;
  cfg.seed = seed;
  return cfg;
}

// Pipeline stages ---------------------------------------------------------

struct IngestResult {
  std::vector<CarrierSequence> sequences;
  RawDataset dataset;
};

IngestResult run_ingest_stage(const IngestArgs& args) {
  DatasetPaths paths;
  paths.tracking = args.tracking;
  paths.plays = args.plays;
  paths.players = args.players;
  paths.player_play = args.player_play;
  IngestResult out;
  out.dataset = load_dataset(paths);
  standardize_play_direction(out.dataset);
  out.sequences = extract_carrier_sequences(out.dataset);
  return out;
}

void write_sequences_csv(const std::string& path,
                         const std::vector<CarrierSequence>& seqs) {
  CsvWriter out(path);
  out.write_row({"game_id", "play_id", "carrier_id", "position", "play_type",
                 "start_event", "end_event", "start_frame", "end_frame",
                 "frames"});
  for (const auto& s : seqs) {
    const char* type = s.meta.type == PlayMeta::Type::Run    ? "run"
                       : s.meta.type == PlayMeta::Type::Pass ? "pass"
                                                             : "unknown";
    out.write_row({std::to_string(s.meta.game_id),
                   std::to_string(s.meta.play_id), std::to_string(s.carrier_id),
                   position_name(s.position), type, s.start_event, s.end_event,
                   std::to_string(s.frames.front().carrier.frame_id),
                   std::to_string(s.frames.back().carrier.frame_id),
                   std::to_string(s.frames.size())});
  }
}

std::vector<ModelFrame> sequences_to_frames(
    const std::vector<CarrierSequence>& seqs, IngestReport& report) {
  std::vector<ModelFrame> frames;
  for (const auto& s : seqs) {
    try {
      auto rows = build_model_frames(s, s.meta);
      frames.insert(frames.end(), rows.begin(), rows.end());
    } catch (const std::exception& e) {
      report.warnings.push_back(
          "feature build failed for game " + std::to_string(s.meta.game_id) +
          " play " + std::to_string(s.meta.play_id) + ": " + e.what());
    }
  }
  return frames;
}

struct FitOutputs {
  PosteriorDraws draws;
  ModelDataset data;
};

FitOutputs run_fit_stage(std::vector<ModelFrame> frames,
                         const SamplerArgs& args, const std::string& out_dir) {
  if (frames.empty()) throw ValidationError("no model rows to fit");
  FitOutputs out;
  out.data = make_dataset(frames);
  PriorConfig prior;
  prior.fixed_effect_sd = args.fixed_effect_sd;
  prior.sigma_scale = args.sigma_scale;
  // The model object must outlive the sampler run only; draws are plain data.
  TurnModel model(std::move(out.data), prior);
  LogDensityGradient target = [&model](std::span<const double> q,
                                       std::span<double> g) {
    return model.log_posterior(q, g);
  };
  // The tan-half mean link saturates at |eta| >~ 3, where the likelihood is
  // flat in kappa and chains stall in a diffuse kappa -> 0 region. Starting
  // near the non-centered prior mode keeps every chain inside the basin of
  // attraction of the posterior mode while momenta still differ per chain.
  SamplerConfig fit_config = args.config;
  fit_config.init_radius = 0.1;
  out.draws = run_nuts(target, model.dim(), fit_config,
                       model.parameter_names());
  write_draws_csv(out_dir + "/draws.csv", out.draws);
  write_run_manifest(out_dir + "/run_manifest.json", out.draws, fit_config);
  out.data = model.data();
  return out;
}

std::unordered_map<long long, std::string> load_player_names(
    const std::string& players_csv) {
  std::unordered_map<long long, std::string> names;
  if (players_csv.empty()) return names;
  CsvReader reader(players_csv);
  const int id_col = reader.require_column("nflId");
  const auto name_col = reader.find_column("displayName");
  if (!name_col) return names;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const auto id = parse_int(fields[id_col]);
    if (id) names[*id] = fields[*name_col];
  }
  return names;
}

void print_diagnostics_table(const std::vector<ParameterDiagnostics>& rows) {
  std::printf("%-28s %12s %12s %12s\n", "parameter", "mean", "rhat",
              "ess_bulk");
  for (const auto& r : rows) {
    std::printf("%-28s %12.5f %12.5f %12.1f\n", r.name.c_str(), r.mean, r.rhat,
                r.ess);
  }
}

// Subcommand handlers -----------------------------------------------------

int cmd_ingest(const IngestArgs& args, const std::string& out_dir) {
  auto result = run_ingest_stage(args);
  write_sequences_csv(out_dir + "/sequences.csv", result.sequences);
  result.dataset.report.write(out_dir + "/ingest_report.txt");
  std::printf("sequences: %zu (report: %s/ingest_report.txt)\n",
              result.sequences.size(), out_dir.c_str());
  return 0;
}

int cmd_features(const IngestArgs& args, const std::string& out_dir) {
  auto result = run_ingest_stage(args);
  auto frames = sequences_to_frames(result.sequences, result.dataset.report);
  write_model_frames(out_dir + "/modelframes.csv", frames);
  result.dataset.report.write(out_dir + "/ingest_report.txt");
  std::printf("model rows: %zu from %zu sequences\n", frames.size(),
              result.sequences.size());
  return 0;
}

int cmd_fit(const std::string& data_csv, const SamplerArgs& args,
            const std::string& out_dir) {
  require_file(data_csv);
  auto frames = read_model_frames(data_csv);
  auto fit = run_fit_stage(std::move(frames), args, out_dir);
  std::printf("draws: %s/draws.csv (%d kept per chain, %d divergences)\n",
              out_dir.c_str(), fit.draws.kept_per_chain,
              fit.draws.total_divergences());
  return 0;
}

int cmd_summarize(const std::string& draws_csv, const std::string& data_csv,
                  const std::string& combine_csv,
                  const std::string& players_csv, const PositionFloors& floors,
                  const std::string& out_dir) {
  require_file(draws_csv);
  require_file(data_csv);
  if (!combine_csv.empty()) require_file(combine_csv);
  if (!players_csv.empty()) require_file(players_csv);

  const PosteriorDraws draws = read_draws_csv(draws_csv);
  const auto frames = read_model_frames(data_csv);
  const ModelDataset data = make_dataset(frames);
  if (TurnModel::kUOffset + data.num_players() + TurnModel::kNumSigmas !=
      draws.dim) {
    throw ValidationError("draws file does not match the model-frame data");
  }
  PosteriorSummary summary(draws, data);
  const auto roster = build_roster(frames, load_player_names(players_csv));
  const auto ratings = summary.ratings(roster, floors);
  if (ratings.empty()) {
    std::fprintf(stderr, "warning: no players pass the play-count floors\n");
  }
  std::vector<double> angles;
  angles.reserve(frames.size());
  for (const auto& f : frames) angles.push_back(f.phi);

  std::optional<std::unordered_map<long long, double>> combine;
  if (!combine_csv.empty()) combine = load_combine_csv(combine_csv);
  export_artifacts(out_dir, summary.fixed_effect_rows(), summary.sigma_rows(),
                   ratings, angles, combine);
  std::printf("artifacts written to %s\n", out_dir.c_str());
  return 0;
}

int cmd_simulate(const SimArgs& args, std::uint64_t seed,
                 const std::string& out_dir) {
  const SimulateConfig cfg = make_sim_config(args, seed);
  const SimulatedData data = simulate_dataset(default_truth(), cfg);
  write_model_frames(out_dir + "/modelframes.csv", data.frames);
  write_truth_manifest(out_dir + "/truth_manifest.json", default_truth(), cfg,
                       data);
  std::printf("simulated %zu rows for %zu players\n", data.frames.size(),
              data.players.size());
  return 0;
}

int cmd_recover(const SimArgs& sim_args, const SamplerArgs& sampler_args,
                const std::string& out_dir) {
  const SimulateConfig cfg = make_sim_config(sim_args, sampler_args.config.seed);
  const TrueParams truth = default_truth();
  const SimulatedData data = simulate_dataset(truth, cfg);
  write_model_frames(out_dir + "/modelframes.csv", data.frames);
  write_truth_manifest(out_dir + "/truth_manifest.json", truth, cfg, data);

  auto fit = run_fit_stage(data.frames, sampler_args, out_dir);
  PosteriorSummary summary(fit.draws, fit.data);
  const auto diags = diagnose_draws(fit.draws);

  // Truth vs posterior for every fixed effect and sigma.
  std::vector<std::string> names = {"alpha0"};
  std::vector<double> truths = {truth.alpha0};
  for (std::size_t k = 0; k < kMeanCovariates; ++k) {
    names.push_back("beta_" + mean_covariate_names()[k]);
    truths.push_back(truth.beta[k]);
  }
  names.push_back("gamma0");
  truths.push_back(truth.gamma0);
  for (std::size_t k = 0; k < kConcCovariates; ++k) {
    names.push_back("psi_" + conc_covariate_names()[k]);
    truths.push_back(truth.psi[k]);
  }
  const char* sigma_names[] = {"sigma_rb", "sigma_te", "sigma_wr"};
  const char* log_sigma_names[] = {"log_sigma_rb", "log_sigma_te",
                                   "log_sigma_wr"};
  CsvWriter report(out_dir + "/recovery_report.csv");
  report.write_row({"parameter", "truth", "mean", "sd", "q2.5", "q97.5",
                    "covered", "rhat", "ess_bulk"});
  double max_rhat = 0.0;
  auto write_line = [&](const std::string& name, double tr,
                        const std::string& diag_name) {
    const SummaryRow row = summary.row(name);
    const auto it = std::find_if(
        diags.begin(), diags.end(),
        [&](const ParameterDiagnostics& d) { return d.name == diag_name; });
    if (it == diags.end()) throw std::runtime_error("missing diagnostics row");
    max_rhat = std::max(max_rhat, it->rhat);
    const bool covered = tr >= row.q025 && tr <= row.q975;
    report.write_row({name, format_double(tr), format_double(row.mean),
                      format_double(row.sd), format_double(row.q025),
                      format_double(row.q975), covered ? "1" : "0",
                      format_double(it->rhat), format_double(it->ess)});
  };
  for (std::size_t i = 0; i < names.size(); ++i) {
    write_line(names[i], truths[i], names[i]);
  }
  for (int p = 0; p < 3; ++p) {
    // Rank-based rhat/ess are invariant under exp, so the log-scale
    // diagnostics apply to sigma as-is.
    write_line(sigma_names[p], truth.sigma[p], log_sigma_names[p]);
  }
  std::printf(
      "recovery report: %s/recovery_report.csv (max rhat %.4f, %d "
      "divergences)\n",
      out_dir.c_str(), max_rhat, fit.draws.total_divergences());
  return 0;
}

int cmd_diagnose(const std::string& draws_csv, const std::string& out_dir) {
  require_file(draws_csv);
  const PosteriorDraws draws = read_draws_csv(draws_csv);
  const auto rows = diagnose_draws(draws);
  print_diagnostics_table(rows);
  int divergences = 0;
  for (const auto& c : draws.chains) divergences += c.divergences;
  std::printf("total divergences: %d\n", divergences);
  if (!out_dir.empty()) {
    write_diagnostics_csv(out_dir + "/diagnostics.csv", rows);
  }
  for (const auto& r : rows) {
    if (r.rhat >= 1.05) {
      std::fprintf(stderr, "rhat gate failed: %s has rhat %.4f >= 1.05\n",
                   r.name.c_str(), r.rhat);
      return 2;
    }
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"turnmix: von Mises mixed-effects turn-angle pipeline"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file (flags override config values)")
      ->configurable(false);

  std::string out_dir;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Extract carrier sequences");
  ingest->fallthrough();
  IngestArgs ingest_args;
  const IngestOptions ingest_opts = add_ingest_options(ingest, ingest_args);
  CLI::Option* ingest_out = ingest->add_option("-o,--out", out_dir);

  // features
  auto* features = app.add_subcommand("features", "Build model-frame CSV");
  features->fallthrough();
  IngestArgs features_args;
  const IngestOptions features_opts = add_ingest_options(features, features_args);
  CLI::Option* features_out = features->add_option("-o,--out", out_dir);

  // fit
  auto* fit = app.add_subcommand("fit", "Sample the posterior");
  fit->fallthrough();
  std::string fit_data;
  CLI::Option* fit_data_opt =
      fit->add_option("--data", fit_data, "Model-frame CSV");
  SamplerArgs fit_sampler;
  const SamplerOptions fit_sampler_opts = add_sampler_options(fit, fit_sampler);
  CLI::Option* fit_out = fit->add_option("-o,--out", out_dir);

  // summarize
  auto* summarize = app.add_subcommand("summarize", "Write report artifacts");
  summarize->fallthrough();
  std::string sum_draws, sum_data, sum_combine, sum_players;
  CLI::Option* sum_draws_opt =
      summarize->add_option("--draws", sum_draws, "draws.csv from fit");
  CLI::Option* sum_data_opt =
      summarize->add_option("--data", sum_data, "Model-frame CSV");
  CLI::Option* sum_combine_opt = summarize->add_option(
      "--combine", sum_combine, "Combine-times CSV (player_id,forty_time_seconds)");
  CLI::Option* sum_players_opt = summarize->add_option(
      "--players", sum_players, "players.csv for display names");
  PositionFloors floors;
  CLI::Option* floor_rb = summarize->add_option("--floor-rb", floors.rb);
  CLI::Option* floor_te = summarize->add_option("--floor-te", floors.te);
  CLI::Option* floor_wr = summarize->add_option("--floor-wr", floors.wr);
  CLI::Option* sum_out = summarize->add_option("-o,--out", out_dir);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic data");
  simulate->fallthrough();
  SimArgs sim_args;
  const SimOptions sim_opts = add_sim_options(simulate, sim_args);
  std::uint64_t sim_seed = 1;
  CLI::Option* sim_seed_opt = simulate->add_option("--seed", sim_seed);
  CLI::Option* sim_out = simulate->add_option("-o,--out", out_dir);

  // recover
  auto* recover = app.add_subcommand("recover", "Simulate, fit, and compare");
  recover->fallthrough();
  SimArgs rec_sim_args;
  const SimOptions rec_sim_opts = add_sim_options(recover, rec_sim_args);
  SamplerArgs rec_sampler;
  const SamplerOptions rec_sampler_opts = add_sampler_options(recover, rec_sampler);
  CLI::Option* rec_out = recover->add_option("-o,--out", out_dir);

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "Rhat/ESS table from draws");
  diagnose->fallthrough();
  std::string diag_draws;
  CLI::Option* diag_draws_opt =
      diagnose->add_option("--draws", diag_draws, "draws.csv path");
  CLI::Option* diag_out = diagnose->add_option("-o,--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const nlohmann::json cfg = load_config(config_path);
    auto out_from_config = [&](CLI::Option* opt) {
      fill_from_config(cfg, "out", opt, out_dir);
      return prepare_out_dir(out_dir);
    };
    if (app.got_subcommand(ingest)) {
      fill_ingest_from_config(cfg, ingest_opts, ingest_args);
      validate_ingest_args(ingest_args);
      return cmd_ingest(ingest_args, out_from_config(ingest_out));
    }
    if (app.got_subcommand(features)) {
      fill_ingest_from_config(cfg, features_opts, features_args);
      validate_ingest_args(features_args);
      return cmd_features(features_args, out_from_config(features_out));
    }
    if (app.got_subcommand(fit)) {
      fill_from_config(cfg, "data", fit_data_opt, fit_data);
      fill_sampler_from_config(cfg, fit_sampler_opts, fit_sampler);
      if (fit_data.empty()) throw ValidationError("--data is required");
      validate_sampler_args(fit_sampler);
      return cmd_fit(fit_data, fit_sampler, out_from_config(fit_out));
    }
    if (app.got_subcommand(summarize)) {
      fill_from_config(cfg, "draws", sum_draws_opt, sum_draws);
      fill_from_config(cfg, "data", sum_data_opt, sum_data);
      fill_from_config(cfg, "combine", sum_combine_opt, sum_combine);
      fill_from_config(cfg, "players", sum_players_opt, sum_players);
      fill_from_config(cfg, "floor_rb", floor_rb, floors.rb);
      fill_from_config(cfg, "floor_te", floor_te, floors.te);
      fill_from_config(cfg, "floor_wr", floor_wr, floors.wr);
      if (sum_draws.empty()) throw ValidationError("--draws is required");
      if (sum_data.empty()) throw ValidationError("--data is required");
      return cmd_summarize(sum_draws, sum_data, sum_combine, sum_players,
                           floors, out_from_config(sum_out));
    }
    if (app.got_subcommand(simulate)) {
      fill_sim_from_config(cfg, sim_opts, sim_args);
      fill_from_config(cfg, "seed", sim_seed_opt, sim_seed);
      return cmd_simulate(sim_args, sim_seed, out_from_config(sim_out));
    }
    if (app.got_subcommand(recover)) {
      fill_sim_from_config(cfg, rec_sim_opts, rec_sim_args);
      fill_sampler_from_config(cfg, rec_sampler_opts, rec_sampler);
      validate_sampler_args(rec_sampler);
      return cmd_recover(rec_sim_args, rec_sampler, out_from_config(rec_out));
    }
    if (app.got_subcommand(diagnose)) {
      fill_from_config(cfg, "draws", diag_draws_opt, diag_draws);
      if (diag_draws.empty()) throw ValidationError("--draws is required");
      std::string dir;
      if (diag_out->count() > 0 || cfg.contains("out") ||
          std::getenv("TURNMIX_OUT")) {
        fill_from_config(cfg, "out", diag_out, out_dir);
        dir = prepare_out_dir(out_dir);
      }
      return cmd_diagnose(diag_draws, dir);
    }
    return 1;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const SchemaError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 2;
  }
}

}  // namespace turnmix
