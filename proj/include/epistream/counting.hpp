#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "epistream/episode.hpp"
#include "epistream/event.hpp"

namespace epistream {

using Count = std::int64_t;

struct BatchFrequency {
  Episode episode;
  BatchIndex batch = 0;
  Count count = 0;
};

struct CountRequest {
  std::vector<Episode> patterns;  // distinct, mixed lengths allowed
  const Batch* batch = nullptr;
};

// Maximum number of non-overlapped occurrences of a serial episode. Consecutive
// nodes must match events with strictly increasing timestamps. Greedy: the
// automaton takes the earliest admissible event for each node and restarts
// after every completed occurrence.
Count count_nonoverlapped(const Episode& episode, std::span<const Event> events);
inline Count count_nonoverlapped(const Episode& episode, const Batch& batch) {
  return count_nonoverlapped(episode, batch.events);
}

// Counts every pattern in a single pass, dispatching each event to the
// automata waiting on its type. Results are aligned with `patterns`.
std::vector<Count> count_many_serial(std::span<const Episode> patterns, std::span<const Event> events);

// Same contract as count_many_serial; patterns are split into chunks counted
// on separate OpenMP threads. Output is identical to the serial kernel.
std::vector<Count> count_many(std::span<const Episode> patterns, std::span<const Event> events);

std::vector<BatchFrequency> count_request(const CountRequest& request);

class OracleSizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

constexpr std::size_t kDefaultOracleBound = 16;

// Exhaustive maximum over sets of pairwise non-overlapped occurrences. Two
// occurrences are non-overlapped when the event span of one ends before the
// other starts. Exponential; refuses inputs longer than `bound` events.
Count brute_force_max_nonoverlapped(const Episode& episode, std::span<const Event> events,
                                    std::size_t bound = kDefaultOracleBound);

}  // namespace epistream
