#include "epistream/ranking.hpp"

#include <algorithm>
#include <functional>

namespace epistream {

TopK rank_top_k(std::vector<Ranked> candidates, std::size_t k) {
  TopK out;
  std::sort(candidates.begin(), candidates.end(), [](const Ranked& a, const Ranked& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.episode < b.episode;
  });
  if (k == 0 || candidates.empty()) {
    out.shortfall = candidates.size() < k;
    return out;
  }
  out.shortfall = candidates.size() < k;
  const std::size_t cut = std::min(k, candidates.size()) - 1;
  out.kth_value = candidates[cut].value;
  std::size_t end = cut + 1;
  while (end < candidates.size() && candidates[end].value == out.kth_value) ++end;
  candidates.resize(end);
  out.items = std::move(candidates);
  return out;
}

Count kth_highest(std::vector<Count> values, std::size_t k) {
  if (k == 0 || values.size() < k) return 0;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end(), std::greater<>());
  return values[k - 1];
}

EpisodeSet episodes_of(const std::vector<Ranked>& items) {
  EpisodeSet out;
  for (const auto& r : items) out.insert(r.episode);
  return out;
}

}  // namespace epistream
