#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epistream/counting.hpp"
#include "epistream/episode.hpp"
#include "epistream/event.hpp"
#include "epistream/lattice.hpp"
#include "epistream/ranking.hpp"

namespace epistream {

enum class Variant { Alg0, Alg1, Alg2, Alg3, Alg4, Alg5 };

std::string to_string(Variant v);
Variant parse_variant(std::string_view name);

// How far below the batch f_k the mining threshold is set.
enum class ThresholdPolicy {
  BatchTopK,   // theta = 0
  ExactTopK,   // theta = 2(m-1)Delta
  NextBatch,   // theta = 2Delta
  Persistent,  // theta = 2(m-v)Delta
  Heuristic,   // theta = m(2 - v/m - (v/m)^2)Delta
};

double theta(ThresholdPolicy policy, int m, int v, double delta);

// max(1, ceil(fk - theta)).
Count threshold(ThresholdPolicy policy, Count fk, int m, int v, double delta);

struct DeltaPolicy {
  bool estimated = true;
  double fixed = 0.0;          // used when !estimated
  double percentile = 75.0;    // nearest-rank percentile of |count changes|
  std::size_t min_samples = 4;
  double delta0_frac = 0.05;   // initial Delta as a fraction of the first batch's f_k
};

struct MinerConfig {
  std::size_t k = 25;
  std::size_t l = 3;
  int m = 10;
  std::optional<int> v;
  Variant variant = Variant::Alg3;
  DeltaPolicy delta;
  double epsilon_step = 0.1;
  std::size_t window_event_cap = 5'000'000;  // Alg 0 refuses larger windows
  // Incremental variants only: overrides the threshold policy implied by `variant`.
  std::optional<ThresholdPolicy> policy_override;

  void validate() const;
  ThresholdPolicy policy() const;
  int persistence() const { return v.value_or(m); }
};

struct DeltaState {
  double delta = 0.0;
  std::vector<double> history;
  bool fallback = false;
};

// Nearest-rank percentile of |cur - prev| over the episodes present in both
// maps. With fewer than min_samples common episodes the previous Delta is
// kept and `fallback` is set.
double estimate_delta(const EpisodeMap<Count>& prev, const EpisodeMap<Count>& cur, DeltaState& state,
                      double percentile = 75.0, std::size_t min_samples = 4);

struct BatchUpdate {
  Count fk = 0;
  Count f_min = 1;
  double delta = 0.0;
  bool delta_fallback = false;
  bool shortfall = false;
  int rounds = 0;              // threshold-lowering rounds (first batch only)
  std::size_t counted = 0;     // patterns counted against the batch
  std::size_t candidates = 0;  // episodes generated by joins
  std::size_t removed = 0;     // nodes erased by demotions
};

struct FirstBatch {
  PatternLattice lattice;
  BatchUpdate update;
};

// Progressive lowering to find f_k, then one more mining run at f_k - theta.
FirstBatch mine_first_batch(const Batch& batch, const MinerConfig& config);

// Lattice maintenance for one batch at a fixed threshold: counts frequent,
// border and candidate nodes level by level, demotes (erasing super-episodes),
// promotes, and generates the next level's candidates from the newly frequent
// episodes only. Level 1 is seeded with event types not yet in the lattice;
// level-1 nodes whose symbol is absent from the batch are dropped.
// `precounted` supplies batch counts already known for some episodes.
BatchUpdate update_lattice(PatternLattice& lattice, const Batch& batch, Count f_min,
                           const EpisodeMap<Count>* precounted = nullptr);

// f_k from the carried-over frequent top-level episodes, Delta update, then
// update_lattice at f_k - theta.
BatchUpdate incremental_update(PatternLattice& lattice, const Batch& batch, const MinerConfig& config,
                               DeltaState& delta);

struct WindowReport {
  BatchIndex window = 0;
  std::vector<Ranked> ranked;
  Count fk = 0;
  Count f_min = 0;
  double delta = 0.0;
  double runtime_ms = 0.0;
  std::size_t node_count = 0;
  std::size_t counted_patterns = 0;
  bool partial = false;
  bool delta_fallback = false;
  bool shortfall = false;

  std::string flags() const;
};

WindowReport report_topk_window(const PatternLattice& lattice, const Window& window, std::size_t k, std::size_t l);

// One variant processing a stream batch by batch.
class StreamMiner {
 public:
  virtual ~StreamMiner() = default;
  virtual WindowReport process(const Batch& batch) = 0;
  // Top-level episodes the variant currently tracks as frequent.
  virtual std::vector<Episode> tracked() const = 0;
};

// Threshold-based incremental mining (Alg 3/4/5 and the exact top-k policy).
class IncrementalMiner : public StreamMiner {
 public:
  explicit IncrementalMiner(MinerConfig config);
  WindowReport process(const Batch& batch) override;
  std::vector<Episode> tracked() const override;

  const PatternLattice* lattice() const { return lattice_ ? &*lattice_ : nullptr; }
  const BatchUpdate& last_update() const { return last_; }
  const DeltaState& delta_state() const { return delta_; }

 private:
  MinerConfig config_;
  std::optional<PatternLattice> lattice_;
  DeltaState delta_;
  BatchUpdate last_;
};

std::unique_ptr<StreamMiner> make_miner(const MinerConfig& config);

std::vector<WindowReport> run_variant(std::span<const Batch> batches, const MinerConfig& config);

}  // namespace epistream
