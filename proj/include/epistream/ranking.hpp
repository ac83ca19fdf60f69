#pragma once

#include <cstddef>
#include <vector>

#include "epistream/counting.hpp"
#include "epistream/episode.hpp"

namespace epistream {

struct Ranked {
  Episode episode;
  Count value = 0;

  friend bool operator==(const Ranked&, const Ranked&) = default;
};

struct TopK {
  std::vector<Ranked> items;  // non-increasing value, lexicographic within ties
  Count kth_value = 0;
  bool shortfall = false;  // fewer than k candidates
};

// All candidates whose value is >= the k-th largest value (ties included).
TopK rank_top_k(std::vector<Ranked> candidates, std::size_t k);

// k-th largest value; values beyond the end count as zero.
Count kth_highest(std::vector<Count> values, std::size_t k);

EpisodeSet episodes_of(const std::vector<Ranked>& items);

}  // namespace epistream
