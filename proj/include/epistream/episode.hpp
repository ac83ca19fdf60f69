#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "epistream/event.hpp"

namespace epistream {

// A serial episode: an ordered sequence of event types, repeats allowed.
// Nodes are stored inline; episodes longer than kMaxEpisodeLength are rejected.
class Episode {
 public:
  static constexpr std::size_t kMaxEpisodeLength = 8;

  Episode() = default;
  Episode(std::initializer_list<EventType> nodes);
  explicit Episode(std::span<const EventType> nodes);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  EventType operator[](std::size_t i) const { return nodes_[i]; }
  EventType front() const { return nodes_[0]; }
  EventType back() const { return nodes_[size_ - 1]; }
  std::span<const EventType> nodes() const { return {nodes_.data(), size_}; }

  Episode prefix() const;  // drop last node
  Episode suffix() const;  // drop first node
  Episode without(std::size_t pos) const;
  Episode appended(EventType t) const;
  Episode prepended(EventType t) const;

  std::size_t hash() const;

  friend bool operator==(const Episode& a, const Episode& b) {
    return a.size_ == b.size_ && std::equal(a.nodes_.begin(), a.nodes_.begin() + a.size_, b.nodes_.begin());
  }
  // Lexicographic on the node sequence.
  friend std::strong_ordering operator<=>(const Episode& a, const Episode& b) {
    return std::lexicographical_compare_three_way(a.nodes_.begin(), a.nodes_.begin() + a.size_,
                                                  b.nodes_.begin(), b.nodes_.begin() + b.size_);
  }

 private:
  std::array<EventType, kMaxEpisodeLength> nodes_{};
  std::size_t size_ = 0;
};

struct EpisodeHash {
  std::size_t operator()(const Episode& e) const { return e.hash(); }
};

using EpisodeSet = std::unordered_set<Episode, EpisodeHash>;
template <typename V>
using EpisodeMap = std::unordered_map<Episode, V, EpisodeHash>;

// "A->B->C" rendering. Without a symbol table ids are printed as numbers.
std::string to_string(const Episode& e, const SymbolTable* symbols = nullptr);
Episode parse_episode(std::string_view text, const SymbolTable& symbols);

// True if `sub` can be obtained from `super` by deleting nodes.
bool is_subsequence(const Episode& sub, const Episode& super);

// Distinct length-(n-1) episodes obtained by deleting exactly one node.
std::vector<Episode> maximal_subepisodes(const Episode& e);

// Suffix/prefix join: a + b.back() when a.suffix() == b.prefix().
std::optional<Episode> serial_join(const Episode& a, const Episode& b);

struct CandidateSet {
  std::size_t level = 0;
  std::vector<Episode> episodes;  // sorted, unique
  std::size_t join_attempts = 0;
};

// Level-(i+1) candidates from the frequent level-i set. When `fresh` is
// nullopt every closure-valid join is returned; otherwise only candidates with
// at least one maximal subepisode in *fresh are produced, and join attempts
// are anchored on members of *fresh.
CandidateSet generate_candidates(const EpisodeSet& frequent, const std::optional<EpisodeSet>& fresh);

}  // namespace epistream
