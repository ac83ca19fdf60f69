#include "epistream/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <unistd.h>

namespace epistream {

std::string Evaluation::flags() const {
  std::string out;
  if (precision_undefined) out += "precision_undefined";
  if (recall_undefined) out += out.empty() ? "recall_undefined" : "|recall_undefined";
  return out.empty() ? "-" : out;
}

Evaluation evaluate(const EpisodeSet& predicted, const EpisodeSet& truth) {
  std::size_t hits = 0;
  for (const auto& e : predicted) hits += truth.count(e);
  Evaluation ev;
  ev.precision_undefined = predicted.empty();
  ev.recall_undefined = truth.empty();
  ev.precision = predicted.empty() ? 0.0 : static_cast<double>(hits) / predicted.size();
  ev.recall = truth.empty() ? 0.0 : static_cast<double>(hits) / truth.size();
  return ev;
}

std::string VariantSpec::label() const {
  return v ? to_string(variant) + "_v" + std::to_string(*v) : to_string(variant);
}

std::string VariantSpec::text() const {
  return v ? to_string(variant) + ":" + std::to_string(*v) : to_string(variant);
}

VariantSpec parse_variant_spec(std::string_view text) {
  VariantSpec spec;
  const auto colon = text.find(':');
  spec.variant = parse_variant(text.substr(0, colon));
  if (colon != std::string_view::npos) {
    const auto rest = text.substr(colon + 1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty())
      throw ConfigError("bad persistence value in variant '" + std::string(text) + "'");
    spec.v = v;
  }
  return spec;
}

std::vector<VariantSpec> parse_variant_list(std::string_view text) {
  std::vector<VariantSpec> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(parse_variant_spec(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty variant list");
  return out;
}

namespace {

MinerConfig config_for(const MinerConfig& base, const VariantSpec& spec) {
  MinerConfig c = base;
  c.variant = spec.variant;
  if (spec.v) c.v = spec.v;
  c.validate();
  return c;
}

std::optional<double> embedded_share(const std::vector<Ranked>& ranked, const GroundTruth* truth) {
  if (!truth || ranked.empty()) return std::nullopt;
  std::size_t hits = 0;
  for (const auto& r : ranked)
    for (const auto& e : truth->episodes)
      if (is_subsequence(r.episode, e)) {
        ++hits;
        break;
      }
  return static_cast<double>(hits) / ranked.size();
}

}  // namespace

ExperimentResult run_experiment(std::span<const Batch> batches, const ExperimentConfig& config,
                                const GroundTruth* truth) {
  if (config.variants.empty()) throw ConfigError("no variants requested");
  if (batches.empty()) throw ConfigError("input stream has no events");

  std::vector<VariantSpec> specs{VariantSpec{Variant::Alg0, std::nullopt}};
  for (const auto& s : config.variants)
    if (s.variant != Variant::Alg0) specs.push_back(s);
  // Validate everything before spending time on Alg 0.
  for (const auto& s : specs) config_for(config.miner, s);

  ExperimentResult result;
  for (const auto& s : specs) result.runs.push_back({s, run_variant(batches, config_for(config.miner, s))});

  const auto& truth_reports = result.runs[0].reports;
  const bool alg0_requested = std::any_of(config.variants.begin(), config.variants.end(),
                                          [](const VariantSpec& s) { return s.variant == Variant::Alg0; });
  for (std::size_t r = alg0_requested ? 0 : 1; r < result.runs.size(); ++r) {
    const auto& run = result.runs[r];
    for (std::size_t i = 0; i < run.reports.size(); ++i) {
      const auto& rep = run.reports[i];
      if (rep.partial) continue;
      EvalRow row;
      row.variant = run.spec.label();
      row.window = rep.window;
      row.eval = evaluate(episodes_of(rep.ranked), episodes_of(truth_reports[i].ranked));
      row.truth_precision = embedded_share(rep.ranked, truth);
      row.report = &rep;
      result.rows.push_back(row);
    }
  }

  for (std::size_t i = 1; i < truth_reports.size(); ++i) {
    if (truth_reports[i - 1].partial) continue;
    result.reference.push_back({truth_reports[i].window, evaluate(episodes_of(truth_reports[i - 1].ranked),
                                                                   episodes_of(truth_reports[i].ranked))});
  }
  return result;
}

std::vector<VariantAverage> average_by_variant(const ExperimentResult& result) {
  std::vector<VariantAverage> out;
  std::map<std::string, std::size_t> slot;
  std::map<std::string, std::size_t> truth_windows;
  for (const auto& row : result.rows) {
    auto [it, fresh] = slot.try_emplace(row.variant, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().variant = row.variant;
    }
    auto& a = out[it->second];
    ++a.windows;
    a.precision += row.eval.precision;
    a.recall += row.eval.recall;
    a.runtime_ms += row.report->runtime_ms;
    a.node_count += static_cast<double>(row.report->node_count);
    a.peak_node_count = std::max(a.peak_node_count, row.report->node_count);
    if (row.truth_precision) {
      a.truth_precision = a.truth_precision.value_or(0.0) + *row.truth_precision;
      ++truth_windows[row.variant];
    }
  }
  for (auto& a : out) {
    const double n = static_cast<double>(a.windows);
    a.precision /= n;
    a.recall /= n;
    a.runtime_ms /= n;
    a.node_count /= n;
    if (a.truth_precision) *a.truth_precision /= static_cast<double>(truth_windows[a.variant]);
  }
  return out;
}

namespace {

// Competition ranking: tied values share the rank of the first of them.
std::vector<std::size_t> ranks_of(const std::vector<Ranked>& ranked) {
  std::vector<std::size_t> ranks(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i)
    ranks[i] = (i > 0 && ranked[i].value == ranked[i - 1].value) ? ranks[i - 1] : i + 1;
  return ranks;
}

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

void write_variant_csv(std::ostream& out, const std::vector<WindowReport>& reports, const SymbolTable* symbols) {
  out << "window_id,rank,episode,window_freq,f_k,f_min,delta_used,flags\n";
  for (const auto& rep : reports) {
    const auto ranks = ranks_of(rep.ranked);
    for (std::size_t i = 0; i < rep.ranked.size(); ++i)
      out << rep.window << ',' << ranks[i] << ',' << to_string(rep.ranked[i].episode, symbols) << ','
          << rep.ranked[i].value << ',' << rep.fk << ',' << rep.f_min << ',' << fixed(rep.delta) << ','
          << rep.flags() << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << "variant,window_id,precision,recall,eval_flags,report_flags,node_count,counted_patterns,truth_precision,"
         "runtime_ms\n";
  for (const auto& row : result.rows) {
    out << row.variant << ',' << row.window << ',' << fixed(row.eval.precision) << ',' << fixed(row.eval.recall)
        << ',' << row.eval.flags() << ',' << row.report->flags() << ',' << row.report->node_count << ','
        << row.report->counted_patterns << ',' << (row.truth_precision ? fixed(*row.truth_precision) : "") << ','
        << fixed(row.report->runtime_ms, 3) << '\n';
  }
}

void write_averages_csv(std::ostream& out, const std::vector<VariantAverage>& averages) {
  out << "variant,windows,mean_precision,mean_recall,mean_node_count,peak_node_count,mean_truth_precision,"
         "mean_runtime_ms\n";
  for (const auto& a : averages)
    out << a.variant << ',' << a.windows << ',' << fixed(a.precision) << ',' << fixed(a.recall) << ','
        << fixed(a.node_count, 1) << ',' << a.peak_node_count << ','
        << (a.truth_precision ? fixed(*a.truth_precision) : "") << ',' << fixed(a.runtime_ms, 3) << '\n';
}

void write_reference_csv(std::ostream& out, const std::vector<ReferenceRow>& reference) {
  out << "window_id,precision,recall,flags\n";
  for (const auto& r : reference)
    out << r.window << ',' << fixed(r.eval.precision) << ',' << fixed(r.eval.recall) << ',' << r.eval.flags() << '\n';
}

void write_report_dir(const std::string& dir, const ExperimentResult& result, const SymbolTable* symbols) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    return out;
  };
  for (const auto& run : result.runs) {
    auto out = open("variant_" + run.spec.label() + ".csv");
    write_variant_csv(out, run.reports, symbols);
  }
  {
    auto out = open("summary.csv");
    write_summary_csv(out, result);
  }
  {
    auto out = open("averages.csv");
    write_averages_csv(out, average_by_variant(result));
  }
  auto out = open("reference.csv");
  write_reference_csv(out, result.reference);
}

std::optional<long> resident_kb() {
  std::ifstream in("/proc/self/statm");
  long pages = 0, resident = 0;
  if (!(in >> pages >> resident)) return std::nullopt;
  return resident * (sysconf(_SC_PAGESIZE) / 1024);
}

}  // namespace epistream
