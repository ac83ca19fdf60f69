#include <algorithm>
#include <chrono>
#include <deque>

#include "epistream/levelwise.hpp"
#include "epistream/miner.hpp"

namespace epistream {

namespace {

// Alg 0: keeps the whole window and re-mines it from scratch on every slide.
class WindowRescanMiner : public StreamMiner {
 public:
  explicit WindowRescanMiner(MinerConfig config) : config_(std::move(config)) {}

  WindowReport process(const Batch& batch) override {
    window_.push_back(batch);
    while (window_.size() > static_cast<std::size_t>(config_.m)) window_.pop_front();
    std::size_t events = 0;
    for (const auto& b : window_) events += b.size();
    if (events > config_.window_event_cap)
      throw ConfigError("alg0 window holds " + std::to_string(events) + " events, above the cap of " +
                        std::to_string(config_.window_event_cap));

    std::vector<const Batch*> batches;
    for (const auto& b : window_) batches.push_back(&b);
    ProgressiveResult mined = mine_top_k_progressive(batches, config_.k, config_.l, config_.epsilon_step);

    std::vector<Ranked> candidates;
    for (const auto& [e, c] : mined.mined.top().frequent) candidates.push_back({e, c});
    TopK top = rank_top_k(std::move(candidates), config_.k);
    tracked_.clear();
    for (const auto& [e, c] : mined.mined.top().frequent) tracked_.push_back(e);
    std::sort(tracked_.begin(), tracked_.end());

    WindowReport r;
    r.window = batch.index;
    r.ranked = std::move(top.items);
    r.fk = mined.fk;
    r.f_min = mined.mined.threshold;
    r.partial = window_of(batch.index, config_.m).partial;
    r.shortfall = mined.shortfall || top.shortfall;
    r.node_count = mined.mined.tracked();
    r.counted_patterns = mined.counted_total;
    return r;
  }

  std::vector<Episode> tracked() const override { return tracked_; }

 private:
  MinerConfig config_;
  std::deque<Batch> window_;
  std::vector<Episode> tracked_;
};

// Alg 1 and Alg 2: batchwise top-k. With tracking on (Alg 2), an episode that
// entered a batch top-k keeps being counted until it has been outside the
// batch top-k for m consecutive batches.
class BatchTopKMiner : public StreamMiner {
 public:
  BatchTopKMiner(MinerConfig config, bool tracking) : config_(std::move(config)), tracking_(tracking) {}

  WindowReport process(const Batch& batch) override {
    const Batch* one[] = {&batch};
    ProgressiveResult mined = mine_top_k_progressive(one, config_.k, config_.l, config_.epsilon_step);
    std::vector<Ranked> candidates;
    for (const auto& [e, c] : mined.mined.top().frequent) candidates.push_back({e, c});
    TopK batch_top = rank_top_k(std::move(candidates), config_.k);

    EpisodeMap<Count> known;
    for (const auto& r : batch_top.items) known.emplace(r.episode, r.value);
    std::size_t counted = mined.counted_total;

    if (tracking_) {
      std::vector<Episode> follow;
      for (const auto& [e, misses] : misses_)
        if (!known.count(e)) follow.push_back(e);
      std::sort(follow.begin(), follow.end());
      const auto counts = count_many(follow, batch.events);
      counted += follow.size();
      for (std::size_t i = 0; i < follow.size(); ++i) known.emplace(follow[i], counts[i]);

      for (auto it = misses_.begin(); it != misses_.end();) {
        if (++it->second >= config_.m)
          it = misses_.erase(it);
        else
          ++it;
      }
      for (const auto& r : batch_top.items) misses_[r.episode] = 0;
    }

    history_.push_back(std::move(known));
    while (history_.size() > static_cast<std::size_t>(config_.m)) history_.pop_front();

    EpisodeMap<Count> window_counts;
    for (const auto& batch_counts : history_)
      for (const auto& [e, c] : batch_counts) window_counts[e] += c;
    std::vector<Ranked> window_candidates;
    for (const auto& [e, c] : window_counts) window_candidates.push_back({e, c});
    TopK top = rank_top_k(std::move(window_candidates), config_.k);

    WindowReport r;
    r.window = batch.index;
    r.ranked = std::move(top.items);
    r.fk = batch_top.kth_value;
    r.f_min = batch_top.kth_value;
    r.partial = window_of(batch.index, config_.m).partial;
    r.shortfall = mined.shortfall || top.shortfall;
    r.node_count = window_counts.size() + misses_.size();
    r.counted_patterns = counted;
    return r;
  }

  std::vector<Episode> tracked() const override {
    std::vector<Episode> out;
    if (!history_.empty())
      for (const auto& [e, c] : history_.back()) out.push_back(e);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  MinerConfig config_;
  bool tracking_;
  std::deque<EpisodeMap<Count>> history_;
  EpisodeMap<int> misses_;  // consecutive batches outside the batch top-k
};

}  // namespace

std::unique_ptr<StreamMiner> make_miner(const MinerConfig& config) {
  config.validate();
  switch (config.variant) {
    case Variant::Alg0: return std::make_unique<WindowRescanMiner>(config);
    case Variant::Alg1: return std::make_unique<BatchTopKMiner>(config, false);
    case Variant::Alg2: return std::make_unique<BatchTopKMiner>(config, true);
    default: return std::make_unique<IncrementalMiner>(config);
  }
}

std::vector<WindowReport> run_variant(std::span<const Batch> batches, const MinerConfig& config) {
  auto miner = make_miner(config);
  std::vector<WindowReport> reports;
  reports.reserve(batches.size());
  for (const auto& batch : batches) {
    const auto start = std::chrono::steady_clock::now();
    WindowReport r = miner->process(batch);
    r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace epistream
