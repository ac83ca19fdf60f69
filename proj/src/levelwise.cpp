#include "epistream/levelwise.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "epistream/ranking.hpp"

namespace epistream {

std::size_t MiningResult::tracked() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.frequent.size() + level.border.size();
  return n;
}

std::vector<EventType> types_present(std::span<const Batch* const> batches) {
  std::set<EventType> seen;
  for (const Batch* b : batches)
    for (const auto& e : b->events) seen.insert(e.type);
  return {seen.begin(), seen.end()};
}

namespace {

std::vector<Count> count_over(std::span<const Episode> patterns, std::span<const Batch* const> batches) {
  std::vector<Count> total(patterns.size(), 0);
  for (const Batch* b : batches) {
    const auto counts = count_many(patterns, b->events);
    for (std::size_t i = 0; i < counts.size(); ++i) total[i] += counts[i];
  }
  return total;
}

}  // namespace

MiningResult mine_levelwise(std::span<const Batch* const> batches, Count threshold, std::size_t max_level,
                            std::span<const EventType> universe) {
  if (max_level == 0) throw ConfigError("episode size must be >= 1");
  MiningResult result;
  result.threshold = threshold;

  std::vector<Episode> candidates;
  const auto level_one = universe.empty() ? types_present(batches) : std::vector<EventType>(universe.begin(), universe.end());
  for (EventType t : level_one) candidates.push_back(Episode{t});

  for (std::size_t level = 1; level <= max_level && !candidates.empty(); ++level) {
    const auto counts = count_over(candidates, batches);
    result.counted += candidates.size();
    MinedLevel mined;
    EpisodeSet frequent;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (counts[i] >= threshold) {
        mined.frequent.emplace(candidates[i], counts[i]);
        frequent.insert(candidates[i]);
      } else {
        mined.border.emplace(candidates[i], counts[i]);
      }
    }
    result.levels.push_back(std::move(mined));
    if (level < max_level) candidates = generate_candidates(frequent, std::nullopt).episodes;
  }
  while (result.levels.size() < max_level) result.levels.emplace_back();
  return result;
}

MiningResult mine_levelwise(const Batch& batch, Count threshold, std::size_t max_level,
                            std::span<const EventType> universe) {
  const Batch* one[] = {&batch};
  return mine_levelwise(one, threshold, max_level, universe);
}

ProgressiveResult mine_top_k_progressive(std::span<const Batch* const> batches, std::size_t k, std::size_t max_level,
                                         double epsilon_step, std::span<const EventType> universe) {
  if (k == 0) throw ConfigError("k must be >= 1");
  if (!(epsilon_step > 0.0 && epsilon_step < 1.0)) throw ConfigError("epsilon_step must lie in (0, 1)");

  ProgressiveResult out;
  const auto level_one = universe.empty() ? types_present(batches) : std::vector<EventType>(universe.begin(), universe.end());
  std::vector<Episode> singletons;
  for (EventType t : level_one) singletons.push_back(Episode{t});
  const auto singleton_counts = count_over(singletons, batches);
  out.counted_total = singletons.size();

  Count threshold = 0;
  if (!singleton_counts.empty()) {
    threshold = singleton_counts.size() >= k
                    ? kth_highest(singleton_counts, k)
                    : *std::min_element(singleton_counts.begin(), singleton_counts.end());
  }
  if (threshold <= 0) {
    out.shortfall = true;
    out.mined = mine_levelwise(batches, 1, max_level, level_one);
    out.counted_total += out.mined.counted;
    return out;
  }

  while (true) {
    out.mined = mine_levelwise(batches, threshold, max_level, level_one);
    ++out.rounds;
    out.counted_total += out.mined.counted;
    const auto& top = out.mined.top().frequent;
    if (top.size() >= k) break;
    if (threshold == 1) {
      out.shortfall = true;
      break;
    }
    const auto lowered = static_cast<Count>(std::floor(static_cast<double>(threshold) * (1.0 - epsilon_step)));
    threshold = std::max<Count>(1, std::min(threshold - 1, lowered));
  }

  std::vector<Count> top_counts;
  for (const auto& [e, c] : out.mined.top().frequent) top_counts.push_back(c);
  out.fk = kth_highest(std::move(top_counts), k);
  return out;
}

}  // namespace epistream
