#include "epistream/miner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "epistream/levelwise.hpp"

namespace epistream {

std::string to_string(Variant v) { return "alg" + std::to_string(static_cast<int>(v)); }

Variant parse_variant(std::string_view name) {
  static constexpr std::string_view names[] = {"alg0", "alg1", "alg2", "alg3", "alg4", "alg5"};
  for (std::size_t i = 0; i < std::size(names); ++i)
    if (name == names[i]) return static_cast<Variant>(i);
  throw ConfigError("unknown variant '" + std::string(name) + "' (expected alg0..alg5)");
}

double theta(ThresholdPolicy policy, int m, int v, double delta) {
  const double md = m;
  const double ratio = static_cast<double>(v) / md;
  switch (policy) {
    case ThresholdPolicy::BatchTopK: return 0.0;
    case ThresholdPolicy::ExactTopK: return 2.0 * (md - 1.0) * delta;
    case ThresholdPolicy::NextBatch: return 2.0 * delta;
    case ThresholdPolicy::Persistent: return 2.0 * (md - v) * delta;
    case ThresholdPolicy::Heuristic: return md * (2.0 - ratio - ratio * ratio) * delta;
  }
  return 0.0;
}

Count threshold(ThresholdPolicy policy, Count fk, int m, int v, double delta) {
  const double x = static_cast<double>(fk) - theta(policy, m, v, delta);
  // Absorb rounding noise from the real-valued theta before taking the ceiling.
  const double up = std::ceil(x - 1e-9);
  return up < 1.0 ? 1 : static_cast<Count>(up);
}

void MinerConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (l < 1 || l > Episode::kMaxEpisodeLength)
    throw ConfigError("episode size l must lie in [1, " + std::to_string(Episode::kMaxEpisodeLength) + "]");
  if (m < 1) throw ConfigError("m must be >= 1");
  if (v && (*v < 1 || *v > m)) throw ConfigError("v must satisfy 1 <= v <= m");
  if ((variant == Variant::Alg4 || variant == Variant::Alg5) && !v)
    throw ConfigError(to_string(variant) + " requires the persistence parameter v");
  if (policy_override && (*policy_override == ThresholdPolicy::Persistent || *policy_override == ThresholdPolicy::Heuristic) && !v)
    throw ConfigError("persistence policies require v");
  if (!(epsilon_step > 0.0 && epsilon_step < 1.0)) throw ConfigError("epsilon_step must lie in (0, 1)");
  if (!delta.estimated && delta.fixed < 0.0) throw ConfigError("Delta must be non-negative");
  if (delta.delta0_frac < 0.0) throw ConfigError("delta0 fraction must be non-negative");
  if (delta.percentile <= 0.0 || delta.percentile > 100.0) throw ConfigError("percentile must lie in (0, 100]");
}

ThresholdPolicy MinerConfig::policy() const {
  if (policy_override) return *policy_override;
  switch (variant) {
    case Variant::Alg3: return ThresholdPolicy::NextBatch;
    case Variant::Alg4: return ThresholdPolicy::Persistent;
    case Variant::Alg5: return ThresholdPolicy::Heuristic;
    default: return ThresholdPolicy::BatchTopK;
  }
}

double estimate_delta(const EpisodeMap<Count>& prev, const EpisodeMap<Count>& cur, DeltaState& state,
                      double percentile, std::size_t min_samples) {
  std::vector<Count> diffs;
  for (const auto& [e, c] : cur) {
    auto it = prev.find(e);
    if (it != prev.end()) diffs.push_back(c > it->second ? c - it->second : it->second - c);
  }
  if (diffs.empty() || diffs.size() < min_samples) {
    state.fallback = true;
    return state.delta;
  }
  std::sort(diffs.begin(), diffs.end());
  const auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(diffs.size()) - 1e-9));
  state.delta = static_cast<double>(diffs[std::clamp<std::size_t>(rank, 1, diffs.size()) - 1]);
  state.fallback = false;
  state.history.push_back(state.delta);
  return state.delta;
}

FirstBatch mine_first_batch(const Batch& batch, const MinerConfig& config) {
  const Batch* one[] = {&batch};
  const auto universe = types_present(one);
  ProgressiveResult top = mine_top_k_progressive(one, config.k, config.l, config.epsilon_step, universe);

  BatchUpdate u;
  u.fk = top.fk;
  u.rounds = top.rounds;
  u.shortfall = top.shortfall;
  u.delta = config.delta.estimated ? config.delta.delta0_frac * static_cast<double>(top.fk) : config.delta.fixed;
  u.f_min = threshold(config.policy(), u.fk, config.m, config.persistence(), u.delta);

  MiningResult mined = mine_levelwise(one, u.f_min, config.l, universe);
  u.counted = top.mined.counted + mined.counted;
  return FirstBatch{PatternLattice::from_mining(mined, config.m, batch.index), u};
}

BatchUpdate update_lattice(PatternLattice& lattice, const Batch& batch, Count f_min,
                           const EpisodeMap<Count>* precounted) {
  BatchUpdate u;
  u.f_min = f_min;
  const BatchIndex s = batch.index;

  std::vector<Episode> candidates;
  {
    std::set<EventType> seen;
    for (const auto& e : batch.events) seen.insert(e.type);
    for (EventType t : seen)
      if (!lattice.contains(Episode{t})) candidates.push_back(Episode{t});
  }

  for (std::size_t i = 1; i <= lattice.max_level(); ++i) {
    std::vector<Episode> existing;
    existing.reserve(lattice.level(i).size());
    for (const auto& [e, node] : lattice.level(i)) existing.push_back(e);
    std::sort(existing.begin(), existing.end());
    std::erase_if(candidates, [&](const Episode& c) { return lattice.contains(c); });

    std::vector<Episode> to_count;
    std::vector<Count> counts(existing.size() + candidates.size(), 0);
    std::vector<std::size_t> slots;
    for (std::size_t j = 0; j < existing.size() + candidates.size(); ++j) {
      const Episode& e = j < existing.size() ? existing[j] : candidates[j - existing.size()];
      if (precounted) {
        if (auto it = precounted->find(e); it != precounted->end()) {
          counts[j] = it->second;
          continue;
        }
      }
      to_count.push_back(e);
      slots.push_back(j);
    }
    const auto fresh_counts = count_many(to_count, batch.events);
    for (std::size_t j = 0; j < slots.size(); ++j) counts[slots[j]] = fresh_counts[j];
    u.counted += to_count.size();

    EpisodeSet frequent;
    EpisodeSet fresh;
    for (std::size_t j = 0; j < existing.size(); ++j) {
      const Episode& e = existing[j];
      const Count c = counts[j];
      const bool was_frequent = lattice.find(e)->status == NodeStatus::Frequent;
      if (c >= f_min) {
        lattice.promote(e, c, s);
        frequent.insert(e);
        if (!was_frequent) fresh.insert(e);
      } else if (i == 1 && c == 0) {
        // A symbol absent from the batch carries nothing; it is re-seeded when it returns.
        u.removed += lattice.remove(e);
      } else {
        if (was_frequent) u.removed += lattice.demote_to_border(e, s);
        lattice.record_border(e, c, s);
      }
    }
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      const Episode& e = candidates[j];
      const Count c = counts[existing.size() + j];
      if (c >= f_min) {
        lattice.promote(e, c, s);
        frequent.insert(e);
        fresh.insert(e);
      } else {
        lattice.record_border(e, c, s);
      }
    }

    candidates.clear();
    if (i < lattice.max_level() && !fresh.empty()) {
      candidates = generate_candidates(frequent, fresh).episodes;
      u.candidates += candidates.size();
    }
  }
  return u;
}

BatchUpdate incremental_update(PatternLattice& lattice, const Batch& batch, const MinerConfig& config,
                               DeltaState& delta) {
  const std::size_t top = lattice.max_level();
  const auto carried = lattice.frequent(top);
  const auto counts = count_many(carried, batch.events);

  const Count fk = kth_highest(counts, config.k);
  bool fallback = false;
  if (config.delta.estimated) {
    EpisodeMap<Count> prev;
    EpisodeMap<Count> cur;
    for (std::size_t i = 0; i < carried.size(); ++i) {
      const auto latest = lattice.find(carried[i])->ring.latest();
      if (latest && latest->first == batch.index - 1) {
        prev.emplace(carried[i], latest->second);
        cur.emplace(carried[i], counts[i]);
      }
    }
    estimate_delta(prev, cur, delta, config.delta.percentile, config.delta.min_samples);
    fallback = delta.fallback;
  } else {
    delta.delta = config.delta.fixed;
  }

  const Count f_min = threshold(config.policy(), fk, config.m, config.persistence(), delta.delta);
  EpisodeMap<Count> known;
  for (std::size_t i = 0; i < carried.size(); ++i) known.emplace(carried[i], counts[i]);
  BatchUpdate u = update_lattice(lattice, batch, f_min, &known);
  u.fk = fk;
  u.delta = delta.delta;
  u.delta_fallback = fallback;
  u.shortfall = carried.size() < config.k;
  u.counted += carried.size();
  return u;
}

std::string WindowReport::flags() const {
  std::string out;
  const auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '|';
    out += name;
  };
  add(partial, "partial");
  add(delta_fallback, "delta_fallback");
  add(shortfall, "shortfall");
  return out.empty() ? "-" : out;
}

WindowReport report_topk_window(const PatternLattice& lattice, const Window& window, std::size_t k, std::size_t l) {
  std::vector<Ranked> candidates;
  for (const auto& [e, node] : lattice.level(l)) {
    if (node.status != NodeStatus::Frequent) continue;
    candidates.push_back({e, node.ring.sum(window.first_batch, window.end_batch)});
  }
  TopK top = rank_top_k(std::move(candidates), k);
  WindowReport r;
  r.window = window.end_batch;
  r.ranked = std::move(top.items);
  r.shortfall = top.shortfall;
  r.partial = window.partial;
  r.node_count = lattice.node_count();
  return r;
}

IncrementalMiner::IncrementalMiner(MinerConfig config) : config_(std::move(config)) { config_.validate(); }

WindowReport IncrementalMiner::process(const Batch& batch) {
  // With no frequent top-level episode left (e.g. after an empty batch) there is
  // no f_k to carry over, so the next non-empty batch is bootstrapped afresh.
  if (lattice_ && lattice_->frequent_count(config_.l) == 0 && !batch.empty()) lattice_.reset();
  if (!lattice_) {
    if (batch.empty()) {
      WindowReport r;
      r.window = batch.index;
      r.partial = window_of(batch.index, config_.m).partial;
      r.shortfall = true;
      return r;
    }
    FirstBatch first = mine_first_batch(batch, config_);
    lattice_.emplace(std::move(first.lattice));
    last_ = first.update;
    delta_.delta = last_.delta;
  } else {
    last_ = incremental_update(*lattice_, batch, config_, delta_);
  }
  WindowReport r = report_topk_window(*lattice_, window_of(batch.index, config_.m), config_.k, config_.l);
  r.fk = last_.fk;
  r.f_min = last_.f_min;
  r.delta = last_.delta;
  r.delta_fallback = last_.delta_fallback;
  r.shortfall = r.shortfall || last_.shortfall;
  r.counted_patterns = last_.counted;
  return r;
}

std::vector<Episode> IncrementalMiner::tracked() const {
  return lattice_ ? lattice_->frequent(config_.l) : std::vector<Episode>{};
}

}  // namespace epistream
