#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "epistream/counting.hpp"
#include "epistream/episode.hpp"
#include "epistream/event.hpp"

namespace epistream {

enum class DriftKind { None, RandomWalk };

struct GenConfig {
  int alphabet_size = 500;
  double noise_rate = 10.0;          // aggregate background events/sec
  double powerlaw_exponent = 2.0;    // noise weight of rank r is r^-exponent
  int num_patterns = 10;
  int pattern_length = 4;
  double pattern_rate = 10.0;        // initial occurrences/sec per pattern
  double intra_gap = 0.01;           // mean gap between events of one occurrence, seconds
  DriftKind drift = DriftKind::RandomWalk;
  double drift_step = 0.02;          // rate multiplied by (1 +/- step) at every batch boundary
  double batch_span = 100.0;         // seconds; also the drift period
  double duration = 2000.0;          // seconds
  std::uint64_t seed = 1;

  void validate() const;
  int num_batches() const;
};

struct GroundTruth {
  std::vector<Episode> episodes;
  std::vector<std::vector<Count>> per_batch;  // per_batch[s-1][p]: occurrences started in batch s
  std::vector<std::vector<double>> rates;     // rates[s-1][p]: pattern rate in force during batch s

  std::size_t num_batches() const { return per_batch.size(); }
};

struct GeneratedStream {
  SymbolTable symbols;
  std::vector<Event> events;
  GroundTruth truth;
  TimeUs batch_span = 0;

  // Batches anchored at time zero, covering the whole configured duration.
  std::vector<Batch> batches() const;
};

// Symbols are named "e1".."eN" by noise rank; pattern p takes the ids
// immediately below the previous pattern's, starting from the rarest rank.
GeneratedStream generate_stream(const GenConfig& config);

// Expected absolute per-batch change of an embedded pattern's count caused by
// one drift step at the initial rate: step * rate * span. Poisson noise adds
// roughly sqrt(2 * rate * span) on top.
double expected_drift_delta(const GenConfig& config);

void export_ground_truth(std::ostream& out, const GroundTruth& truth, const SymbolTable& symbols);
void export_ground_truth(const std::string& path, const GroundTruth& truth, const SymbolTable& symbols);
GroundTruth read_ground_truth(std::istream& in, const SymbolTable& symbols);

}  // namespace epistream
