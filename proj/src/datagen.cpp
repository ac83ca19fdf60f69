#include "epistream/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace epistream {

void GenConfig::validate() const {
  if (alphabet_size < 1) throw ConfigError("alphabet_size must be positive");
  if (num_patterns < 0) throw ConfigError("num_patterns must be non-negative");
  if (pattern_length < 1 || pattern_length > static_cast<int>(Episode::kMaxEpisodeLength))
    throw ConfigError("pattern_length out of range");
  if (static_cast<long long>(num_patterns) * pattern_length > alphabet_size)
    throw ConfigError("patterns need num_patterns * pattern_length <= alphabet_size distinct types");
  if (noise_rate < 0.0 || pattern_rate < 0.0) throw ConfigError("rates must be non-negative");
  if (!(powerlaw_exponent > 1.0)) throw ConfigError("powerlaw_exponent must exceed 1");
  if (intra_gap < 0.0) throw ConfigError("intra_gap must be non-negative");
  if (drift_step < 0.0 || drift_step >= 1.0) throw ConfigError("drift_step must be in [0, 1)");
  if (!(batch_span > 0.0)) throw ConfigError("batch_span must be positive");
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
}

int GenConfig::num_batches() const { return static_cast<int>(std::ceil(duration / batch_span - 1e-9)); }

std::vector<Batch> GeneratedStream::batches() const {
  std::vector<Batch> out = batchify(events, batch_span, 0);
  const auto want = static_cast<BatchIndex>(truth.num_batches());
  // Trailing batches without events still belong to the stream.
  for (BatchIndex s = static_cast<BatchIndex>(out.size()) + 1; s <= want; ++s) {
    Batch b;
    b.index = s;
    b.begin = (s - 1) * batch_span;
    b.end = s * batch_span;
    out.push_back(std::move(b));
  }
  return out;
}

GeneratedStream generate_stream(const GenConfig& config) {
  config.validate();
  GeneratedStream out;
  out.batch_span = seconds_to_us(config.batch_span);
  for (int r = 1; r <= config.alphabet_size; ++r) out.symbols.intern("e" + std::to_string(r));

  std::mt19937_64 rng(config.seed);
  const TimeUs end = seconds_to_us(config.duration);
  const int nb = config.num_batches();

  // Background: one Poisson process at the aggregate rate, each event's type
  // drawn by power-law rank weight. Equivalent to independent per-type processes.
  if (config.noise_rate > 0.0) {
    std::vector<double> weights(config.alphabet_size);
    for (int r = 1; r <= config.alphabet_size; ++r) weights[r - 1] = std::pow(r, -config.powerlaw_exponent);
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    std::exponential_distribution<double> gap(config.noise_rate);
    for (double t = gap(rng); t < config.duration; t += gap(rng)) {
      const TimeUs us = seconds_to_us(t);
      if (us >= end) break;
      out.events.push_back({static_cast<EventType>(pick(rng)), us});
    }
  }

  for (int p = 0; p < config.num_patterns; ++p) {
    std::vector<EventType> nodes;
    const int first = config.alphabet_size - (p + 1) * config.pattern_length;
    for (int i = 0; i < config.pattern_length; ++i) nodes.push_back(static_cast<EventType>(first + i));
    out.truth.episodes.emplace_back(std::span<const EventType>(nodes));
  }

  out.truth.per_batch.assign(nb, std::vector<Count>(config.num_patterns, 0));
  out.truth.rates.assign(nb, std::vector<double>(config.num_patterns, config.pattern_rate));
  std::vector<double> rate(config.num_patterns, config.pattern_rate);
  std::uniform_int_distribution<int> coin(0, 1);
  std::exponential_distribution<double> unit_exp(1.0);

  for (int b = 0; b < nb; ++b) {
    if (b > 0 && config.drift == DriftKind::RandomWalk) {
      for (int p = 0; p < config.num_patterns; ++p) {
        const double factor = coin(rng) ? 1.0 + config.drift_step : 1.0 - config.drift_step;
        rate[p] = std::clamp(rate[p] * factor, 0.1 * config.pattern_rate, 10.0 * config.pattern_rate);
      }
    }
    const double b_begin = b * config.batch_span;
    const double b_end = std::min((b + 1) * config.batch_span, config.duration);
    for (int p = 0; p < config.num_patterns; ++p) {
      out.truth.rates[b][p] = rate[p];
      if (rate[p] <= 0.0) continue;
      const Episode& ep = out.truth.episodes[p];
      for (double t = b_begin + unit_exp(rng) / rate[p]; t < b_end; t += unit_exp(rng) / rate[p]) {
        TimeUs us = seconds_to_us(t);
        ++out.truth.per_batch[b][p];
        for (std::size_t i = 0; i < ep.size(); ++i) {
          if (i > 0) us += std::max<TimeUs>(1, seconds_to_us(unit_exp(rng) * config.intra_gap));
          if (us >= end) break;
          out.events.push_back({ep[i], us});
        }
      }
    }
  }

  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const Event& a, const Event& b) { return a.time < b.time; });
  return out;
}

double expected_drift_delta(const GenConfig& config) {
  if (config.drift == DriftKind::None) return 0.0;
  return config.drift_step * config.pattern_rate * config.batch_span;
}

void export_ground_truth(std::ostream& out, const GroundTruth& truth, const SymbolTable& symbols) {
  out << "batch,episode,intended_count\n";
  for (std::size_t b = 0; b < truth.per_batch.size(); ++b)
    for (std::size_t p = 0; p < truth.episodes.size(); ++p)
      out << (b + 1) << ',' << to_string(truth.episodes[p], &symbols) << ',' << truth.per_batch[b][p] << '\n';
}

void export_ground_truth(const std::string& path, const GroundTruth& truth, const SymbolTable& symbols) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  export_ground_truth(out, truth, symbols);
  if (!out) throw std::runtime_error("write failed: " + path);
}

GroundTruth read_ground_truth(std::istream& in, const SymbolTable& symbols) {
  GroundTruth truth;
  std::string line;
  std::size_t lineno = 0;
  EpisodeMap<std::size_t> slot;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::istringstream row(line);
    std::string batch_text, episode_text, count_text;
    if (!std::getline(row, batch_text, ',') || !std::getline(row, episode_text, ',') || !std::getline(row, count_text))
      throw ParseError(lineno, "expected batch,episode,intended_count");
    std::size_t batch = 0;
    Count count = 0;
    try {
      batch = std::stoul(batch_text);
      count = std::stoll(count_text);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad number");
    }
    if (batch == 0) throw ParseError(lineno, "batch numbers start at 1");
    const Episode ep = parse_episode(episode_text, symbols);
    auto [it, fresh] = slot.try_emplace(ep, truth.episodes.size());
    if (fresh) {
      truth.episodes.push_back(ep);
      for (auto& row_counts : truth.per_batch) row_counts.push_back(0);
    }
    if (truth.per_batch.size() < batch) truth.per_batch.resize(batch, std::vector<Count>(truth.episodes.size(), 0));
    truth.per_batch[batch - 1][it->second] = count;
  }
  return truth;
}

}  // namespace epistream
