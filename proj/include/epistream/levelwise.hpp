#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "epistream/counting.hpp"
#include "epistream/episode.hpp"
#include "epistream/event.hpp"

namespace epistream {

struct MinedLevel {
  EpisodeMap<Count> frequent;
  EpisodeMap<Count> border;
};

struct MiningResult {
  std::vector<MinedLevel> levels;  // levels[0] holds size-1 episodes
  Count threshold = 1;
  std::size_t counted = 0;  // patterns counted in this run

  std::size_t tracked() const;
  const MinedLevel& top() const { return levels.back(); }
};

// Apriori level-wise mining. An episode's count is the sum of its counts in
// each batch. Level-1 candidates are `universe`, or the event types present
// in the batches when `universe` is empty.
MiningResult mine_levelwise(std::span<const Batch* const> batches, Count threshold, std::size_t max_level,
                            std::span<const EventType> universe = {});
MiningResult mine_levelwise(const Batch& batch, Count threshold, std::size_t max_level,
                            std::span<const EventType> universe = {});

struct ProgressiveResult {
  MiningResult mined;
  Count fk = 0;  // k-th highest count among size-max_level episodes
  int rounds = 0;
  std::size_t counted_total = 0;  // pattern counts over all rounds, singleton scan included
  bool shortfall = false;
};

// Mines with a threshold that starts at the k-th highest singleton count and
// is lowered by the factor (1 - epsilon_step) until at least k episodes of
// size max_level are frequent or the threshold reaches 1.
ProgressiveResult mine_top_k_progressive(std::span<const Batch* const> batches, std::size_t k, std::size_t max_level,
                                         double epsilon_step, std::span<const EventType> universe = {});

std::vector<EventType> types_present(std::span<const Batch* const> batches);

}  // namespace epistream
