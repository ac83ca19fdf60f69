#include "epistream/event.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace epistream {

TimeUs seconds_to_us(double seconds) {
  return static_cast<TimeUs>(std::llround(seconds * static_cast<double>(kMicrosPerSecond)));
}

double us_to_seconds(TimeUs t) { return static_cast<double>(t) / static_cast<double>(kMicrosPerSecond); }

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

OrderingError::OrderingError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

EventType SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<EventType>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

const std::string& SymbolTable::name(EventType id) const { return names_.at(id); }

bool SymbolTable::contains(std::string_view name) const { return ids_.count(std::string(name)) != 0; }

EventType SymbolTable::id(std::string_view name) const { return ids_.at(std::string(name)); }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<Event> read_events(std::istream& in, SymbolTable& symbols) {
  std::vector<Event> events;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;

    const auto tab = view.find('\t');
    if (tab == std::string_view::npos) throw ParseError(lineno, "expected 'timestamp<TAB>event_type'");
    const std::string_view ts = trim(view.substr(0, tab));
    const std::string_view name = trim(view.substr(tab + 1));
    if (name.empty()) throw ParseError(lineno, "empty event type");
    if (name.find('\t') != std::string_view::npos) throw ParseError(lineno, "too many fields");

    double seconds = 0.0;
    const auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), seconds);
    if (ec != std::errc() || ptr != ts.data() + ts.size() || !std::isfinite(seconds))
      throw ParseError(lineno, "bad timestamp '" + std::string(ts) + "'");
    if (seconds < 0.0) throw ParseError(lineno, "negative timestamp");

    const TimeUs t = seconds_to_us(seconds);
    if (!events.empty() && t < events.back().time)
      throw OrderingError(lineno, "timestamp " + std::string(ts) + " precedes the previous event");
    events.push_back(Event{symbols.intern(name), t});
  }
  return events;
}

std::vector<Event> read_events_file(const std::string& path, SymbolTable& symbols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open event file '" + path + "'");
  return read_events(in, symbols);
}

void write_events(std::ostream& out, const std::vector<Event>& events, const SymbolTable& symbols) {
  for (const auto& e : events) {
    const TimeUs whole = e.time / kMicrosPerSecond;
    const TimeUs frac = e.time % kMicrosPerSecond;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%06lld", static_cast<long long>(whole), static_cast<long long>(frac));
    out << buf << '\t' << symbols.name(e.type) << '\n';
  }
}

std::vector<Batch> batchify(const std::vector<Event>& events, TimeUs span, TimeUs origin) {
  if (span <= 0) throw ConfigError("batch span must be positive");
  std::vector<Batch> batches;
  if (events.empty()) return batches;
  if (events.front().time < origin) throw ConfigError("stream origin lies after the first event");

  const auto index_of = [&](TimeUs t) { return static_cast<BatchIndex>((t - origin) / span) + 1; };
  const BatchIndex last = index_of(events.back().time);
  batches.resize(static_cast<std::size_t>(last));
  for (BatchIndex s = 1; s <= last; ++s) {
    auto& b = batches[static_cast<std::size_t>(s - 1)];
    b.index = s;
    b.begin = origin + (s - 1) * span;
    b.end = origin + s * span;
  }
  for (const auto& e : events) {
    const BatchIndex s = index_of(e.time);
    if (s < 1 || s > last) throw OrderingError(0, "event out of order during batching");
    batches[static_cast<std::size_t>(s - 1)].events.push_back(e);
  }
  return batches;
}

std::vector<Batch> batchify(const std::vector<Event>& events, TimeUs span) {
  return batchify(events, span, events.empty() ? 0 : events.front().time);
}

Window window_of(BatchIndex s, int m) {
  Window w;
  w.end_batch = s;
  w.m = m;
  w.first_batch = std::max<BatchIndex>(1, s - m + 1);
  w.partial = s < m;
  return w;
}

}  // namespace epistream
