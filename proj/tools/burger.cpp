/*
 * Copyright 2026 The Burger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: dataset preparation, training, evaluation,
// standalone enhancement, robustness sweeps and self checks.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "burger/config.hpp"
#include "burger/denoise.hpp"
#include "burger/error.hpp"
#include "burger/eval.hpp"
#include "burger/graph_io.hpp"
#include "burger/ingest.hpp"
#include "burger/random.hpp"
#include "burger/robustness.hpp"
#include "burger/selfcheck.hpp"
#include "burger/snapshot.hpp"
#include "burger/trainer.hpp"

namespace fs = std::filesystem;
using namespace burger;

namespace {

/// Output directory with a manifest that records, for every file written,
/// the config hash and seed it came from.
class OutputDir {
 public:
  OutputDir(const fs::path& dir, bool force, std::string config_hash, std::uint64_t seed)
      : dir_(dir), hash_(std::move(config_hash)), seed_(seed) {
    if (fs::exists(dir_) && !fs::is_directory(dir_))
      throw InvalidConfiguration("cli", "dispatch", dir_.string() + " is not a directory");
    if (fs::exists(dir_) && !fs::is_empty(dir_) && !force)
      throw InvalidConfiguration("cli", "dispatch",
                                 "output directory " + dir_.string() + " is not empty (use --force)");
    fs::create_directories(dir_);
    manifest_.set("config_hash", hash_);
    manifest_.set("source_seed", std::to_string(seed_));
  }

  /// Adds the derived random streams of a training run.
  void training_seeds() {
    manifest_.set("seed.init", std::to_string(derive_seed(seed_, kInitStream)));
    manifest_.set("seed.tensor", std::to_string(derive_seed(seed_, kTensorStream)));
    manifest_.set("seed.sampler", std::to_string(derive_seed(seed_, kSamplerStream)));
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void text(const std::string& name, const std::string& body) {
    std::ofstream out(path(name));
    if (!out) throw InvalidInput("cli", "dispatch", "cannot write " + path(name).string());
    out << body;
    record(name);
  }

  /// Marks a file written by someone else.
  void record(const std::string& name) {
    manifest_.set("artifact." + name, "config_hash=" + hash_ + " seed=" + std::to_string(seed_));
  }

  void set(const std::string& key, const std::string& value) { manifest_.set(key, value); }

  /// Copies the entries of a manifest another writer left in the directory.
  void absorb(const fs::path& existing) {
    const Manifest m = Manifest::read(existing);
    for (const auto& [k, v] : m.entries()) manifest_.set(k, v);
  }

  void close() { manifest_.write(dir_ / "manifest.txt"); }

 private:
  fs::path dir_;
  std::string hash_;
  std::uint64_t seed_;
  Manifest manifest_;
};

std::string changes_csv(const FusionResult& fusion) {
  std::ostringstream os;
  os << "user,observed,kept,dropped,added\n";
  for (const auto& c : fusion.changes)
    os << c.user << ',' << c.observed << ',' << c.kept << ',' << c.dropped << ',' << c.added << '\n';
  return os.str();
}

std::string ranks_csv(const MetricReport& m) {
  std::ostringstream os;
  os << "user,rank\n";
  for (std::size_t k = 0; k < m.ranks.size(); ++k) os << m.user_ids[k] << ',' << m.ranks[k] << '\n';
  return os.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    TrainRunConfig probe;
    set_config_value(probe, "alpha", item);
    out.push_back(probe.alpha);
  }
  return out;
}

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string preset;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--set", overrides, "override one config key (key=value), repeatable");
    cmd->add_option("--preset", preset, "alpha/beta preset: ciao, douban or yelp");
    cmd->add_option("--seed", seed, "override the run seed");
  }

  TrainRunConfig load() const {
    TrainRunConfig c = config_path.empty() ? TrainRunConfig{} : load_config(config_path);
    if (!preset.empty()) apply_preset(c, preset);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw InvalidConfiguration("cli", "dispatch", "--set expects key=value, got '" + kv + "'");
      set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) c.seed = *seed;
    c.validate();
    return c;
  }
};

nlohmann::json metrics_json(const MetricReport& m) { return nlohmann::json::parse(m.to_json()); }

// --- subcommands -----------------------------------------------------------

struct IngestArgs {
  std::string interactions, social, out;
  ConfigArgs config;
  bool all_negatives = false;
  bool force = false;
};

int cmd_ingest(const IngestArgs& a) {
  const LoadedInteractions li = load_interactions(a.interactions);
  const LoadedSocial ls = load_social(a.social, li.user_ids);
  const TrainRunConfig config = a.config.load();
  const Dataset ds = split_dataset(li.graph, ls.graph, config.split_options(a.all_negatives));
  OutputDir out(a.out, a.force, config_hash(config), config.seed);
  write_dataset(a.out, ds);
  for (const char* f : {"train.edges", "social.edges", "test.tsv", "test_remainder.tsv",
                        "negatives.tsv"})
    out.record(f);
  out.absorb(out.path("manifest.txt"));
  write_id_map(out.path("user_ids.txt"), li.user_ids);
  write_id_map(out.path("item_ids.txt"), li.item_ids);
  out.record("user_ids.txt");
  out.record("item_ids.txt");
  out.set("users", std::to_string(ds.num_users()));
  out.set("items", std::to_string(ds.num_items()));
  out.set("dropped_unknown_social", std::to_string(ls.dropped_unknown));
  out.set("dropped_self_loops", std::to_string(ls.dropped_self_loops));
  out.close();
  std::cout << "users " << ds.num_users() << ", items " << ds.num_items() << ", train edges "
            << ds.train.num_edges() << ", eval users " << ds.eval_users().size() << '\n';
  return 0;
}

struct SynthArgs {
  SyntheticSpec spec;
  std::string out;
  ConfigArgs config;
  bool force = false;
};

int cmd_synth(const SynthArgs& a) {
  TrainRunConfig config = a.config.load();
  if (!a.config.seed) config.seed = a.spec.seed;
  const SyntheticData data = generate_synthetic(a.spec);
  const Dataset ds = split_dataset(data.interactions, data.social, config.split_options());
  OutputDir out(a.out, a.force, config_hash(config), config.seed);
  write_dataset(a.out, ds);
  for (const char* f : {"train.edges", "social.edges", "test.tsv", "test_remainder.tsv",
                        "negatives.tsv"})
    out.record(f);
  out.absorb(out.path("manifest.txt"));
  write_interactions(out.path("interactions.edges"), data.interactions);
  write_social_graph(out.path("clean_social.edges"), data.clean_social);
  write_edge_list(out.path("noise.edges"), data.noise);
  for (const char* f : {"interactions.edges", "clean_social.edges", "noise.edges"}) out.record(f);
  std::ostringstream communities;
  communities << "kind,index,community\n";
  for (std::size_t u = 0; u < data.user_community.size(); ++u)
    communities << "user," << u << ',' << data.user_community[u] << '\n';
  for (std::size_t i = 0; i < data.item_community.size(); ++i)
    communities << "item," << i << ',' << data.item_community[i] << '\n';
  out.text("communities.csv", communities.str());
  out.close();
  std::cout << "users " << a.spec.num_users << ", items " << a.spec.num_items << ", interactions "
            << data.interactions.num_edges() << ", social edges " << data.social.num_edges()
            << " (" << data.noise.size() << " injected)\n";
  return 0;
}

struct TrainArgs {
  std::string data, out, grid_alpha, grid_beta;
  ConfigArgs config;
  bool force = false;
};

int cmd_train(const TrainArgs& a) {
  const TrainRunConfig config = a.config.load();
  const Dataset ds = read_dataset(a.data);
  OutputDir out(a.out, a.force, config_hash(config), config.seed);
  out.training_seeds();
  out.text("config.txt", config_to_text(config));

  const RunResult result = run(ds, config, [](const IterationEvent& e) {
    const IterationRow& row = e.row;
    std::cerr << "iteration " << row.iteration + 1 << ": epochs " << row.epochs << ", best HR@3 "
              << row.best_hr3 << ", kept " << row.kept << ", dropped " << row.dropped << ", added "
              << row.added << '\n';
  });

  out.text("runlog.csv", epochs_csv(result.log));
  out.text("losses.csv", steps_csv(result.log));
  out.text("iterations.csv", iterations_csv(result.log));
  for (std::size_t k = 0; k < result.enhanced.size(); ++k) {
    const std::string x = std::to_string(k + 1);
    write_social_graph(out.path("slice_" + x + ".edges"), result.enhanced[k].slice);
    out.record("slice_" + x + ".edges");
    out.text("changes_" + x + ".csv", changes_csv(result.enhanced[k].fusion));
  }
  write_tensor(out.path("tensor"), result.tensor);
  out.record("tensor");
  if (result.log.best.valid) {
    write_snapshot(out.path("snapshot"), result.log.best);
    out.record("snapshot");
  }

  nlohmann::json summary;
  summary["config"] = config_to_text(config);
  summary["config_hash"] = config_hash(config);
  summary["seeds"] = {{"run", config.seed},
                      {"init", derive_seed(config.seed, kInitStream)},
                      {"tensor", derive_seed(config.seed, kTensorStream)},
                      {"sampler", derive_seed(config.seed, kSamplerStream)}};
  if (result.log.best.valid) {
    summary["best"] = metrics_json(result.log.best.metrics);
    summary["best"]["iteration"] = result.log.best.iteration;
    summary["best"]["epoch"] = result.log.best.epoch;
  }
  summary["iterations"] = result.log.iterations.size();
  out.text("metrics.json", summary.dump(2) + "\n");

  if (!a.grid_alpha.empty() || !a.grid_beta.empty()) {
    const std::vector<double> alphas = a.grid_alpha.empty() ? std::vector<double>{config.alpha}
                                                            : parse_list(a.grid_alpha);
    const std::vector<double> betas =
        a.grid_beta.empty() ? std::vector<double>{config.beta} : parse_list(a.grid_beta);
    std::ostringstream grid;
    grid.precision(10);
    grid << "alpha,beta,hr1,hr3,ndcg3\n";
    for (double alpha : alphas)
      for (double beta : betas) {
        TrainRunConfig c = config;
        c.alpha = alpha;
        c.beta = beta;
        const RunResult r = run(ds, c);
        const MetricReport& m = r.log.best.metrics;
        grid << alpha << ',' << beta << ',' << m.hr1 << ',' << m.hr3 << ',' << m.ndcg3 << '\n';
        std::cerr << "grid alpha " << alpha << " beta " << beta << ": HR@3 " << m.hr3 << '\n';
      }
    out.text("grid.csv", grid.str());
  }
  out.close();
  if (result.log.best.valid) std::cout << result.log.best.metrics.to_json() << '\n';
  return 0;
}

struct EvalArgs {
  std::string data, snapshot, out;
  bool force = false;
};

int cmd_eval(const EvalArgs& a) {
  const Snapshot snap = read_snapshot(a.snapshot);
  const Dataset ds = read_dataset(a.data);
  if (snap.interest_users.rows() != ds.num_users() || snap.items.rows() != ds.num_items())
    throw InvalidInput("cli", "eval", "snapshot shape does not match the dataset");
  const MetricReport m = evaluate(ds, snap.interest_users, snap.items);
  if (!a.out.empty()) {
    OutputDir out(a.out, a.force, "none", 0);
    out.text("metrics.json", m.to_json() + "\n");
    out.text("ranks.csv", ranks_csv(m));
    out.close();
  }
  std::cout << m.to_json() << '\n';
  return 0;
}

struct DenoiseArgs {
  std::string data, snapshot, out;
  ConfigArgs config;
  bool force = false;
};

int cmd_denoise(const DenoiseArgs& a) {
  const TrainRunConfig config = a.config.load();
  const Snapshot snap = read_snapshot(a.snapshot);
  const Dataset ds = read_dataset(a.data);
  if (snap.social_users.rows() != ds.num_users())
    throw InvalidInput("cli", "denoise", "snapshot shape does not match the dataset");
  const EnhancedSlice e =
      build_enhanced_slice(snap.interest_users, snap.social_users, ds.social, config.enhance_options());
  OutputDir out(a.out, a.force, config_hash(config), config.seed);
  write_social_graph(out.path("slice_1.edges"), e.slice);
  out.record("slice_1.edges");
  out.text("changes_1.csv", changes_csv(e.fusion));
  out.close();
  std::cout << "kept " << e.fusion.total_kept() << ", dropped " << e.fusion.total_dropped()
            << ", added " << e.fusion.total_added() << ", truncated users "
            << e.fusion.truncated_users << '\n';
  return 0;
}

struct RobustnessArgs {
  std::string data, out, ratios = "0.1,0.2,0.3";
  ConfigArgs config;
  bool with_ablation = true;
  bool force = false;
};

int cmd_robustness(const RobustnessArgs& a) {
  const TrainRunConfig config = a.config.load();
  const Dataset ds = read_dataset(a.data);
  const std::vector<double> ratios = parse_list(a.ratios);
  const RobustnessTable table = robustness_harness(ds, ratios, config, a.with_ablation);
  OutputDir out(a.out, a.force, config_hash(config), config.seed);
  out.training_seeds();
  out.text("config.txt", config_to_text(config));
  out.text("robustness.csv", table.to_csv());
  out.close();
  std::cout << table.to_csv();
  return 0;
}

struct CheckArgs {
  std::string out;
  std::size_t samples = 100000;
  std::size_t instances = 5;
  std::uint64_t seed = 11;
  std::size_t bins = 50;
  bool force = false;
};

std::string histogram_csv(const std::vector<OrderStatisticReport>& reports, std::size_t bins) {
  std::ostringstream os;
  os.precision(10);
  os << "distribution,group,bin_low,bin_high,count\n";
  for (const auto& r : reports) {
    double lo = r.non_friend_samples.empty() ? 0 : r.non_friend_samples.front();
    double hi = lo;
    for (const auto* v : {&r.friend_samples, &r.non_friend_samples})
      for (double x : *v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    const double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    for (const auto& [group, values] :
         {std::pair{"friend", &r.friend_samples}, std::pair{"non_friend", &r.non_friend_samples}}) {
      std::vector<std::size_t> counts(bins, 0);
      for (double x : *values)
        ++counts[std::min(bins - 1, static_cast<std::size_t>((x - lo) / width))];
      for (std::size_t b = 0; b < bins; ++b)
        os << r.distribution << ',' << group << ',' << lo + width * static_cast<double>(b) << ','
           << lo + width * static_cast<double>(b + 1) << ',' << counts[b] << '\n';
    }
  }
  return os.str();
}

int cmd_check(const CheckArgs& a) {
  bool ok = true;
  GradientCheckOptions options;
  options.instances = a.instances;
  options.seed = a.seed;
  for (const auto& c : run_gradient_checks(options)) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << "gradient " << c.name << ": max relative error "
              << c.max_relative_error << " over " << c.entries << " entries\n";
    ok = ok && c.pass;
  }
  const auto reports = run_order_statistic_checks(a.samples, a.seed);
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << "order statistic " << r.distribution
              << ": KS friend " << r.ks_friend << ", non-friend " << r.ks_non_friend
              << ", threshold " << r.threshold << '\n';
    ok = ok && r.pass;
  }
  if (!a.out.empty()) {
    OutputDir out(a.out, a.force, "none", a.seed);
    out.text("histogram.csv", histogram_csv(reports, std::max<std::size_t>(a.bins, 1)));
    out.close();
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social recommendation with denoising-augmented social tensors"};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "load raw edge lists, split, write a dataset");
  c_ingest->add_option("--interactions", ingest.interactions, "user item [rating] lines")->required();
  c_ingest->add_option("--social", ingest.social, "user user lines")->required();
  c_ingest->add_option("--out", ingest.out, "output directory")->required();
  c_ingest->add_flag("--all-negatives", ingest.all_negatives, "rank against every unseen item");
  ingest.config.attach(c_ingest);
  c_ingest->add_flag("--force", ingest.force, "write into a non-empty directory");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "generate a planted-community dataset");
  c_synth->add_option("--out", synth.out, "output directory")->required();
  c_synth->add_option("--users", synth.spec.num_users);
  c_synth->add_option("--items", synth.spec.num_items);
  c_synth->add_option("--communities", synth.spec.num_communities);
  c_synth->add_option("--intra-interaction", synth.spec.intra_interaction_rate);
  c_synth->add_option("--inter-interaction", synth.spec.inter_interaction_rate);
  c_synth->add_option("--intra-social", synth.spec.intra_social_rate);
  c_synth->add_option("--inter-social", synth.spec.inter_social_rate);
  c_synth->add_option("--noise-ratio", synth.spec.noise_ratio);
  c_synth->add_option("--popularity", synth.spec.popularity_exponent, "item popularity exponent");
  c_synth->add_option("--seed", synth.spec.seed, "generator seed; also the split seed unless --set seed");
  c_synth->add_option("--config", synth.config.config_path, "split_ratio / negatives_per_user source");
  c_synth->add_option("--set", synth.config.overrides, "override one config key (key=value)");
  c_synth->add_flag("--force", synth.force, "write into a non-empty directory");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "run the training loop on a dataset directory");
  c_train->add_option("--data", train.data, "dataset directory")->required();
  c_train->add_option("--out", train.out, "output directory")->required();
  c_train->add_option("--grid-alpha", train.grid_alpha, "comma list, e.g. e^-4,e^-3,e^-2");
  c_train->add_option("--grid-beta", train.grid_beta, "comma list");
  c_train->add_flag("--force", train.force, "write into a non-empty directory");
  train.config.attach(c_train);

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "score a saved snapshot");
  c_eval->add_option("--data", eval.data, "dataset directory")->required();
  c_eval->add_option("--snapshot", eval.snapshot, "snapshot directory")->required();
  c_eval->add_option("--out", eval.out, "optional output directory");
  c_eval->add_flag("--force", eval.force, "write into a non-empty directory");

  DenoiseArgs denoise;
  auto* c_denoise = app.add_subcommand("denoise", "build one enhanced social graph from a snapshot");
  c_denoise->add_option("--data", denoise.data, "dataset directory")->required();
  c_denoise->add_option("--snapshot", denoise.snapshot, "snapshot directory")->required();
  c_denoise->add_option("--out", denoise.out, "output directory")->required();
  c_denoise->add_flag("--force", denoise.force, "write into a non-empty directory");
  denoise.config.attach(c_denoise);

  RobustnessArgs robust;
  auto* c_robust = app.add_subcommand("robustness", "retrain under injected social noise");
  c_robust->add_option("--data", robust.data, "dataset directory")->required();
  c_robust->add_option("--out", robust.out, "output directory")->required();
  c_robust->add_option("--ratios", robust.ratios, "comma list of noise ratios in [0, 1)");
  c_robust->add_flag("!--no-ablation", robust.with_ablation, "skip the no-enhancement runs");
  c_robust->add_flag("--force", robust.force, "write into a non-empty directory");
  robust.config.attach(c_robust);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "gradient and order-statistic self checks");
  c_check->add_option("--out", check.out, "write histogram.csv here");
  c_check->add_option("--samples", check.samples, "pairs for the order-statistic check");
  c_check->add_option("--instances", check.instances, "random gradient-check instances");
  c_check->add_option("--seed", check.seed);
  c_check->add_option("--bins", check.bins, "histogram bins");
  c_check->add_flag("--force", check.force, "write into a non-empty directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*c_ingest) return cmd_ingest(ingest);
    if (*c_synth) return cmd_synth(synth);
    if (*c_train) return cmd_train(train);
    if (*c_eval) return cmd_eval(eval);
    if (*c_denoise) return cmd_denoise(denoise);
    if (*c_robust) return cmd_robustness(robust);
    if (*c_check) return cmd_check(check);
  } catch (const ValidationError& e) {
    std::cerr << "burger: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "burger: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "burger: cli::dispatch: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
