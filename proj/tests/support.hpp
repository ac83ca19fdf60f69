#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "epistream/counting.hpp"
#include "epistream/episode.hpp"
#include "epistream/event.hpp"
#include "epistream/levelwise.hpp"
#include "epistream/lattice.hpp"

namespace testing_support {

using namespace epistream;

// Letters map to ids: 'A' -> 0, 'B' -> 1, ...
inline Episode ep(std::string_view letters) {
  std::vector<EventType> nodes;
  for (char c : letters) nodes.push_back(static_cast<EventType>(c - 'A'));
  return Episode(std::span<const EventType>(nodes));
}

// "A1 B2 A3.5": letter plus timestamp in seconds.
inline std::vector<Event> events(std::string_view text) {
  std::vector<Event> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ') {
      ++i;
      continue;
    }
    const char letter = text[i++];
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    out.push_back({static_cast<EventType>(letter - 'A'), seconds_to_us(std::stod(std::string(text.substr(i, j - i))))});
    i = j;
  }
  return out;
}

// Letters at times 1, 2, 3, ... seconds (offset by `start`).
inline std::vector<Event> sequence(std::string_view letters, double start = 0.0) {
  std::vector<Event> out;
  for (std::size_t i = 0; i < letters.size(); ++i)
    out.push_back({static_cast<EventType>(letters[i] - 'A'), seconds_to_us(start + static_cast<double>(i + 1))});
  return out;
}

inline Batch make_batch(std::vector<Event> evs, BatchIndex index = 1) {
  Batch b;
  b.index = index;
  b.begin = 0;
  b.end = evs.empty() ? 1 : evs.back().time + 1;
  b.events = std::move(evs);
  return b;
}

// Random stream with occasional equal timestamps.
inline std::vector<Event> random_events(std::mt19937_64& rng, std::size_t n, int alphabet, double tie_prob = 0.2) {
  std::vector<Event> out;
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::bernoulli_distribution tie(tie_prob);
  TimeUs t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || !tie(rng)) t += 1000;
    out.push_back({static_cast<EventType>(sym(rng)), t});
  }
  return out;
}

inline Episode random_episode(std::mt19937_64& rng, std::size_t len, int alphabet) {
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  std::vector<EventType> nodes;
  for (std::size_t i = 0; i < len; ++i) nodes.push_back(static_cast<EventType>(sym(rng)));
  return Episode(std::span<const EventType>(nodes));
}

// All episodes of length len over an alphabet of the given size.
inline std::vector<Episode> all_episodes(std::size_t len, int alphabet) {
  std::vector<Episode> out;
  std::vector<EventType> nodes(len, 0);
  while (true) {
    out.emplace_back(std::span<const EventType>(nodes));
    std::size_t i = len;
    while (i > 0 && ++nodes[i - 1] == static_cast<EventType>(alphabet)) nodes[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

// Frequent and border sets by exhaustive enumeration over the symbols present
// in the batch: F = count >= threshold, B = below threshold with every
// maximal subepisode frequent. Sorted like PatternLattice::snapshot().
inline std::vector<NodeState> enumerated_lattice(const Batch& batch, Count threshold, std::size_t max_level) {
  std::vector<EventType> present;
  for (const auto& e : batch.events)
    if (std::find(present.begin(), present.end(), e.type) == present.end()) present.push_back(e.type);
  std::sort(present.begin(), present.end());
  std::vector<NodeState> out;
  EpisodeSet frequent;
  if (present.empty()) return out;
  for (std::size_t len = 1; len <= max_level; ++len) {
    EpisodeSet next;
    for (const auto& raw : all_episodes(len, static_cast<int>(present.size()))) {
      std::vector<EventType> nodes;
      for (EventType i : raw.nodes()) nodes.push_back(present[i]);
      const Episode e{std::span<const EventType>(nodes)};
      const Count c = count_nonoverlapped(e, batch.events);
      bool subs_frequent = true;
      if (len >= 2)
        for (std::size_t d = 0; d < len; ++d) subs_frequent = subs_frequent && frequent.count(e.without(d));
      if (c >= threshold) {
        next.insert(e);
        out.push_back({len, NodeStatus::Frequent, e, c});
      } else if (subs_frequent) {
        out.push_back({len, NodeStatus::Border, e, c});
      }
    }
    frequent = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testing_support
