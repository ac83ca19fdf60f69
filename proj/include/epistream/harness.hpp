#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "epistream/datagen.hpp"
#include "epistream/miner.hpp"

namespace epistream {

struct Evaluation {
  double precision = 0.0;
  double recall = 0.0;
  bool precision_undefined = false;  // empty prediction
  bool recall_undefined = false;     // empty truth

  std::string flags() const;
};

Evaluation evaluate(const EpisodeSet& predicted, const EpisodeSet& truth);

// "alg3", or "alg4:5" to set the persistence parameter for that run.
struct VariantSpec {
  Variant variant = Variant::Alg3;
  std::optional<int> v;

  std::string label() const;  // "alg4_v5" style, safe in file names
  std::string text() const;   // "alg4:5"
};

VariantSpec parse_variant_spec(std::string_view text);
std::vector<VariantSpec> parse_variant_list(std::string_view comma_separated);

struct ExperimentConfig {
  MinerConfig miner;  // variant and v are taken from each VariantSpec
  std::vector<VariantSpec> variants;
};

struct VariantRun {
  VariantSpec spec;
  std::vector<WindowReport> reports;
};

struct EvalRow {
  std::string variant;
  BatchIndex window = 0;
  Evaluation eval;
  std::optional<double> truth_precision;  // share of reported episodes drawn from embedded patterns
  const WindowReport* report = nullptr;
};

struct ReferenceRow {
  BatchIndex window = 0;
  Evaluation eval;  // previous window's Alg 0 top-k scored against the current one
};

struct ExperimentResult {
  std::vector<VariantRun> runs;  // runs[0] is always Alg 0
  std::vector<EvalRow> rows;     // complete windows only
  std::vector<ReferenceRow> reference;
};

// Runs Alg 0 plus every requested variant over the same batches and scores
// each complete window against Alg 0's top-k.
ExperimentResult run_experiment(std::span<const Batch> batches, const ExperimentConfig& config,
                                const GroundTruth* truth = nullptr);

struct VariantAverage {
  std::string variant;
  std::size_t windows = 0;
  double precision = 0.0;
  double recall = 0.0;
  double runtime_ms = 0.0;
  double node_count = 0.0;
  std::size_t peak_node_count = 0;
  std::optional<double> truth_precision;
};

std::vector<VariantAverage> average_by_variant(const ExperimentResult& result);

void write_variant_csv(std::ostream& out, const std::vector<WindowReport>& reports, const SymbolTable* symbols);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
void write_averages_csv(std::ostream& out, const std::vector<VariantAverage>& averages);
void write_reference_csv(std::ostream& out, const std::vector<ReferenceRow>& reference);

// variant_<label>.csv for each run, summary.csv, averages.csv, reference.csv.
void write_report_dir(const std::string& dir, const ExperimentResult& result, const SymbolTable* symbols);

// Resident set size of this process in kB, when /proc exposes it.
std::optional<long> resident_kb();

}  // namespace epistream
