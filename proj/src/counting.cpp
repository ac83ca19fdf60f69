#include "epistream/counting.hpp"

#include <algorithm>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace epistream {

Count count_nonoverlapped(const Episode& episode, std::span<const Event> events) {
  if (episode.empty()) return 0;
  Count count = 0;
  std::size_t state = 0;
  TimeUs last = 0;
  for (const auto& e : events) {
    if (e.type != episode[state]) continue;
    if (state > 0 && e.time <= last) continue;
    last = e.time;
    if (++state == episode.size()) {
      ++count;
      state = 0;
    }
  }
  return count;
}

namespace {

struct Automaton {
  std::uint32_t state = 0;
  TimeUs last = 0;
  Count count = 0;
};

// Runs the dispatch kernel over patterns[first, last) and writes into out.
void count_range(std::span<const Episode> patterns, std::size_t first, std::size_t last, std::span<const Event> events,
                 std::span<Count> out) {
  EventType max_type = 0;
  for (std::size_t i = first; i < last; ++i)
    for (EventType t : patterns[i].nodes()) max_type = std::max(max_type, t);

  std::vector<Automaton> automata(last - first);
  std::vector<std::vector<std::uint32_t>> waiting(static_cast<std::size_t>(max_type) + 1);
  for (std::size_t i = first; i < last; ++i)
    if (!patterns[i].empty()) waiting[patterns[i][0]].push_back(static_cast<std::uint32_t>(i - first));

  std::vector<std::uint32_t> scratch;
  for (const auto& e : events) {
    if (e.type > max_type) continue;
    auto& list = waiting[e.type];
    if (list.empty()) continue;
    scratch.swap(list);
    for (std::uint32_t idx : scratch) {
      Automaton& a = automata[idx];
      const Episode& ep = patterns[first + idx];
      if (a.state > 0 && e.time <= a.last) {
        list.push_back(idx);
        continue;
      }
      a.last = e.time;
      if (++a.state == ep.size()) {
        ++a.count;
        a.state = 0;
      }
      waiting[ep[a.state]].push_back(idx);
    }
    scratch.clear();
  }
  for (std::size_t i = first; i < last; ++i) out[i] = automata[i - first].count;
}

}  // namespace

std::vector<Count> count_many_serial(std::span<const Episode> patterns, std::span<const Event> events) {
  std::vector<Count> out(patterns.size(), 0);
  count_range(patterns, 0, patterns.size(), events, out);
  return out;
}

std::vector<Count> count_many(std::span<const Episode> patterns, std::span<const Event> events) {
  constexpr std::size_t kMinChunk = 512;
  std::vector<Count> out(patterns.size(), 0);
#ifdef _OPENMP
  const std::size_t threads = static_cast<std::size_t>(omp_get_max_threads());
#else
  const std::size_t threads = 1;
#endif
  if (threads <= 1 || patterns.size() < 2 * kMinChunk) {
    count_range(patterns, 0, patterns.size(), events, out);
    return out;
  }
  const std::size_t chunks = std::min(threads * 4, patterns.size() / kMinChunk);
  const std::size_t per_chunk = (patterns.size() + chunks - 1) / chunks;
  const auto n_chunks = static_cast<std::int64_t>(chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::size_t first = static_cast<std::size_t>(c) * per_chunk;
    const std::size_t last = std::min(patterns.size(), first + per_chunk);
    if (first < last) count_range(patterns, first, last, events, out);
  }
  return out;
}

std::vector<BatchFrequency> count_request(const CountRequest& request) {
  std::vector<BatchFrequency> out;
  if (request.patterns.empty() || request.batch == nullptr) return out;
  const auto counts = count_many(request.patterns, request.batch->events);
  out.reserve(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    out.push_back(BatchFrequency{request.patterns[i], request.batch->index, counts[i]});
  return out;
}

Count brute_force_max_nonoverlapped(const Episode& episode, std::span<const Event> events, std::size_t bound) {
  if (events.size() > bound)
    throw OracleSizeError("oracle input has " + std::to_string(events.size()) + " events, bound is " +
                          std::to_string(bound));
  if (episode.empty()) return 0;

  // Every occurrence as (first position, last position).
  std::vector<std::pair<std::size_t, std::size_t>> occurrences;
  std::vector<std::size_t> positions;
  std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t node, std::size_t from) {
    if (node == episode.size()) {
      occurrences.emplace_back(positions.front(), positions.back());
      return;
    }
    for (std::size_t i = from; i < events.size(); ++i) {
      if (events[i].type != episode[node]) continue;
      if (node > 0 && events[i].time <= events[positions.back()].time) continue;
      positions.push_back(i);
      extend(node + 1, i + 1);
      positions.pop_back();
    }
  };
  extend(0, 0);

  // Exhaustive search over chains of span-disjoint occurrences.
  std::function<Count(std::size_t)> best_after = [&](std::size_t start) -> Count {
    Count best = 0;
    for (const auto& [first, last] : occurrences)
      if (first >= start) best = std::max(best, 1 + best_after(last + 1));
    return best;
  };
  return best_after(0);
}

}  // namespace epistream
