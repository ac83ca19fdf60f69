#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace epistream {

using EventType = std::uint32_t;
using TimeUs = std::int64_t;  // microseconds
using BatchIndex = std::int64_t;

constexpr TimeUs kMicrosPerSecond = 1'000'000;

TimeUs seconds_to_us(double seconds);
double us_to_seconds(TimeUs t);

struct Event {
  EventType type = 0;
  TimeUs time = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

// Half-open span [(index-1)*span, index*span) relative to the stream origin.
struct Batch {
  BatchIndex index = 1;
  TimeUs begin = 0;
  TimeUs end = 0;
  std::vector<Event> events;

  bool empty() const { return events.empty(); }
  std::size_t size() const { return events.size(); }
};

struct Window {
  BatchIndex end_batch = 1;
  BatchIndex first_batch = 1;
  int m = 1;
  bool partial = false;

  bool contains(BatchIndex s) const { return s >= first_batch && s <= end_batch; }
  std::size_t size() const { return static_cast<std::size_t>(end_batch - first_batch + 1); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class OrderingError : public std::runtime_error {
 public:
  OrderingError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bidirectional map between event-type names and dense ids.
class SymbolTable {
 public:
  EventType intern(std::string_view name);
  const std::string& name(EventType id) const;
  bool contains(std::string_view name) const;
  EventType id(std::string_view name) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, EventType> ids_;
  std::vector<std::string> names_;
};

// Reads "timestamp<TAB>event_type" lines. '#' lines and blank lines are skipped.
std::vector<Event> read_events(std::istream& in, SymbolTable& symbols);
std::vector<Event> read_events_file(const std::string& path, SymbolTable& symbols);

void write_events(std::ostream& out, const std::vector<Event>& events, const SymbolTable& symbols);

// Assigns each event to batch floor((t - origin) / span) + 1. Empty batches
// between the first and last non-empty batch are materialized.
std::vector<Batch> batchify(const std::vector<Event>& events, TimeUs span, TimeUs origin);
std::vector<Batch> batchify(const std::vector<Event>& events, TimeUs span);

Window window_of(BatchIndex s, int m);

}  // namespace epistream
