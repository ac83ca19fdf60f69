#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "epistream/bounds.hpp"
#include "epistream/datagen.hpp"
#include "epistream/harness.hpp"
#include "epistream/miner.hpp"

using namespace epistream;

namespace {

struct Options {
  std::string input;
  double batch_span = 100.0;
  std::optional<double> origin;
  std::string variant = "alg3";
  std::string variants = "alg1,alg2,alg3";
  std::size_t k = 25;
  std::size_t l = 3;
  int m = 10;
  std::optional<int> v;
  std::string delta = "auto";
  double delta0_frac = 0.05;
  double epsilon_step = 0.1;
  std::size_t window_event_cap = 5'000'000;
  std::string policy;
  std::string report_dir;

  GenConfig gen;
  std::string drift = "random_walk";
  std::string output;
  std::string truth_path;

  double phi = 0.0;
  double epsilon = 0.0;
  std::string fk;
};

ThresholdPolicy parse_policy(const std::string& s) {
  if (s == "batch") return ThresholdPolicy::BatchTopK;
  if (s == "exact") return ThresholdPolicy::ExactTopK;
  if (s == "next") return ThresholdPolicy::NextBatch;
  if (s == "persistent") return ThresholdPolicy::Persistent;
  if (s == "heuristic") return ThresholdPolicy::Heuristic;
  throw ConfigError("unknown policy '" + s + "' (batch|exact|next|persistent|heuristic)");
}

MinerConfig miner_config(const Options& o) {
  MinerConfig c;
  c.k = o.k;
  c.l = o.l;
  c.m = o.m;
  c.v = o.v;
  c.epsilon_step = o.epsilon_step;
  c.window_event_cap = o.window_event_cap;
  c.delta.delta0_frac = o.delta0_frac;
  if (o.delta != "auto") {
    c.delta.estimated = false;
    try {
      c.delta.fixed = std::stod(o.delta);
    } catch (const std::exception&) {
      throw ConfigError("--delta expects 'auto' or a number");
    }
  }
  if (!o.policy.empty()) c.policy_override = parse_policy(o.policy);
  return c;
}

GenConfig gen_config(Options o) {
  if (o.drift == "none") o.gen.drift = DriftKind::None;
  else if (o.drift == "random_walk") o.gen.drift = DriftKind::RandomWalk;
  else throw ConfigError("--drift expects none or random_walk");
  o.gen.batch_span = o.batch_span;
  o.gen.validate();
  return o.gen;
}

struct Stream {
  SymbolTable symbols;
  std::vector<Batch> batches;
  std::optional<GroundTruth> truth;
};

Stream load_stream(const Options& o) {
  Stream s;
  if (!o.input.empty()) {
    const auto events = read_events_file(o.input, s.symbols);
    if (events.empty()) throw ConfigError("input '" + o.input + "' contains no events");
    const TimeUs span = seconds_to_us(o.batch_span);
    s.batches = o.origin ? batchify(events, span, seconds_to_us(*o.origin)) : batchify(events, span);
  } else {
    GeneratedStream g = generate_stream(gen_config(o));
    s.batches = g.batches();
    s.symbols = std::move(g.symbols);
    s.truth = std::move(g.truth);
  }
  return s;
}

int cmd_generate(const Options& o) {
  const GeneratedStream g = generate_stream(gen_config(o));
  if (o.output.empty() || o.output == "-") {
    write_events(std::cout, g.events, g.symbols);
  } else {
    std::ofstream out(o.output);
    if (!out) throw std::runtime_error("cannot write " + o.output);
    write_events(out, g.events, g.symbols);
  }
  if (!o.truth_path.empty()) export_ground_truth(o.truth_path, g.truth, g.symbols);
  std::fprintf(stderr, "%zu events, %zu batches, expected drift delta %.2f\n", g.events.size(),
               g.truth.num_batches(), expected_drift_delta(gen_config(o)));
  return 0;
}

int cmd_mine(const Options& o) {
  Stream s = load_stream(o);
  MinerConfig c = miner_config(o);
  const VariantSpec spec = parse_variant_spec(o.variant);
  c.variant = spec.variant;
  if (spec.v) c.v = spec.v;
  c.validate();
  const auto reports = run_variant(s.batches, c);
  if (o.report_dir.empty()) {
    write_variant_csv(std::cout, reports, &s.symbols);
  } else {
    std::filesystem::create_directories(o.report_dir);
    const auto path = std::filesystem::path(o.report_dir) / ("variant_" + spec.label() + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_variant_csv(out, reports, &s.symbols);
  }
  return 0;
}

int cmd_compare(const Options& o) {
  Stream s = load_stream(o);
  ExperimentConfig ec;
  ec.miner = miner_config(o);
  ec.variants = parse_variant_list(o.variants);
  const auto result = run_experiment(s.batches, ec, s.truth ? &*s.truth : nullptr);
  const std::string dir = o.report_dir.empty() ? "report" : o.report_dir;
  write_report_dir(dir, result, &s.symbols);
  write_averages_csv(std::cout, average_by_variant(result));
  std::fprintf(stderr, "reports written to %s\n", dir.c_str());
  return 0;
}

int cmd_bounds(const Options& o) {
  BoundsInput in;
  in.k = static_cast<std::int64_t>(o.k);
  in.m = o.m;
  in.v = o.v.value_or(o.m);
  if (o.delta == "auto") throw ConfigError("bounds needs a numeric --delta");
  in.delta = std::stod(o.delta);
  in.phi = o.phi;
  in.epsilon = o.epsilon;
  std::stringstream list(o.fk);
  for (std::string item; std::getline(list, item, ',');) in.fk_per_batch.push_back(std::stod(item));
  if (in.fk_per_batch.size() == 1) in.fk_per_batch.assign(static_cast<std::size_t>(in.m), in.fk_per_batch[0]);
  const BoundsResult r = bounds(in);
  std::printf("f_lower,f_upper,valid,mu,max_errors,corollary_errors\n");
  std::printf("%.6f,%.6f,%d,%.6f,%.6f,", r.f_lower, r.f_upper, r.valid ? 1 : 0, r.mu, r.max_errors);
  if (r.corollary_errors) std::printf("%.6f", *r.corollary_errors);
  std::printf("\n");
  return 0;
}

void add_miner_flags(CLI::App& app, Options& o) {
  app.add_option("--input", o.input, "event file (timestamp<TAB>type); generator used when absent");
  app.add_option("--batch-span", o.batch_span, "batch span in seconds")->capture_default_str();
  app.add_option("--origin", o.origin, "stream origin in seconds (default: first event)");
  app.add_option("--k", o.k, "top-k")->capture_default_str();
  app.add_option("--l", o.l, "episode size")->capture_default_str();
  app.add_option("--m", o.m, "batches per window")->capture_default_str();
  app.add_option("--v", o.v, "persistence parameter");
  app.add_option("--delta", o.delta, "auto or a fixed Delta")->capture_default_str();
  app.add_option("--delta0-frac", o.delta0_frac, "initial Delta as a fraction of f_k")->capture_default_str();
  app.add_option("--epsilon-step", o.epsilon_step, "threshold lowering fraction")->capture_default_str();
  app.add_option("--window-event-cap", o.window_event_cap, "largest window Alg 0 will re-mine")->capture_default_str();
  app.add_option("--policy", o.policy, "threshold policy override: batch|exact|next|persistent|heuristic");
  app.add_option("--report-dir", o.report_dir, "output directory");
}

void add_gen_flags(CLI::App& app, Options& o) {
  app.add_option("--alphabet", o.gen.alphabet_size)->capture_default_str();
  app.add_option("--noise-rate", o.gen.noise_rate, "background events/sec")->capture_default_str();
  app.add_option("--exponent", o.gen.powerlaw_exponent, "power-law exponent of noise")->capture_default_str();
  app.add_option("--patterns", o.gen.num_patterns)->capture_default_str();
  app.add_option("--pattern-length", o.gen.pattern_length)->capture_default_str();
  app.add_option("--pattern-rate", o.gen.pattern_rate, "occurrences/sec per pattern")->capture_default_str();
  app.add_option("--intra-gap", o.gen.intra_gap, "mean gap inside an occurrence, seconds")->capture_default_str();
  app.add_option("--drift", o.drift, "none|random_walk")->capture_default_str();
  app.add_option("--drift-step", o.gen.drift_step)->capture_default_str();
  app.add_option("--duration", o.gen.duration, "seconds")->capture_default_str();
  app.add_option("--seed", o.gen.seed)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming top-k episode mining"};
  app.set_config("--config", "", "key = value file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  add_miner_flags(app, o);
  add_gen_flags(app, o);
  app.add_option("--variant", o.variant, "mine: alg0..alg5, optionally alg4:V")->capture_default_str();
  app.add_option("--variants", o.variants, "compare: comma-separated variant list")->capture_default_str();
  app.add_option("--output", o.output, "generate: event file (default stdout)");
  app.add_option("--truth", o.truth_path, "generate: ground-truth CSV path");
  app.add_option("--phi", o.phi, "bounds: separation phi");
  app.add_option("--epsilon", o.epsilon, "bounds: separation epsilon");
  app.add_option("--fk", o.fk, "bounds: f_k per batch, comma-separated or one value for all");

  auto* generate = app.add_subcommand("generate", "write a synthetic stream");
  auto* mine = app.add_subcommand("mine", "run one variant and print its window reports");
  auto* compare = app.add_subcommand("compare", "run variants against Alg 0 and write a report directory");
  auto* bnd = app.add_subcommand("bounds", "evaluate the persistence bounds");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*generate) return cmd_generate(o);
    if (*mine) return cmd_mine(o);
    if (*compare) return cmd_compare(o);
    if (*bnd) return cmd_bounds(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
