#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epistream/counting.hpp"
#include "epistream/episode.hpp"
#include "epistream/event.hpp"
#include "epistream/ranking.hpp"

namespace epistream {

struct MiningResult;

enum class NodeStatus { Frequent, Border };

const char* to_string(NodeStatus status);

// Batch counts for the last `capacity` batches, oldest first.
class CountRing {
 public:
  explicit CountRing(std::size_t capacity = 1) : capacity_(capacity) {}

  void push(BatchIndex s, Count c);
  void keep_latest();
  void drop_before(BatchIndex first);

  Count sum(BatchIndex first, BatchIndex last) const;
  std::optional<Count> at(BatchIndex s) const;
  std::optional<std::pair<BatchIndex, Count>> latest() const;

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::vector<std::pair<BatchIndex, Count>>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::vector<std::pair<BatchIndex, Count>> entries_;
};

struct LatticeNode {
  Episode episode;
  NodeStatus status = NodeStatus::Border;
  CountRing ring;
  BatchIndex last_counted = 0;
  std::vector<Episode> children;  // nodes one level up this node is a maximal subepisode of
};

struct WindowFrequency {
  Count value = 0;
  bool present = false;
};

// One row per node, used to compare lattices.
struct NodeState {
  std::size_t level = 0;
  NodeStatus status = NodeStatus::Border;
  Episode episode;
  Count count = 0;

  friend bool operator==(const NodeState&, const NodeState&) = default;
  friend auto operator<=>(const NodeState& a, const NodeState& b) {
    if (a.level != b.level) return a.level <=> b.level;
    if (a.episode != b.episode) return a.episode <=> b.episode;
    if (a.status != b.status) return a.status <=> b.status;
    return a.count <=> b.count;
  }
};

// Frequent and negative-border episodes of sizes 1..max_level, each carrying
// its recent batch counts. Single writer.
class PatternLattice {
 public:
  using Level = EpisodeMap<LatticeNode>;

  PatternLattice(std::size_t max_level, int window_length);

  // Lattice of a from-scratch mining run over batch s.
  static PatternLattice from_mining(const MiningResult& mined, int window_length, BatchIndex s);

  std::size_t max_level() const { return levels_.size(); }
  int window_length() const { return window_length_; }

  const Level& level(std::size_t i) const { return levels_.at(i - 1); }
  LatticeNode* find(const Episode& e);
  const LatticeNode* find(const Episode& e) const;
  bool contains(const Episode& e) const { return find(e) != nullptr; }

  // Adds a node and links it under each of its maximal subepisodes.
  LatticeNode& insert(const Episode& e, NodeStatus status);

  // Records the count and marks the node frequent, creating it if needed.
  void promote(const Episode& e, Count c, BatchIndex s);
  // Records the count for a node that stays (or becomes) border.
  void record_border(const Episode& e, Count c, BatchIndex s);
  // Marks a frequent node border and erases every super-episode reachable
  // through child links. Returns the number of erased nodes.
  std::size_t demote_to_border(const Episode& e, BatchIndex s);
  // Erases e and everything generated from it; returns the number of nodes erased.
  std::size_t remove(const Episode& e) { return erase_subtree(e); }

  WindowFrequency window_frequency(const Episode& e, const Window& w) const;

  // Frequent nodes of `level` ranked by their count in batch s, ties included.
  TopK top_k(std::size_t level, std::size_t k, BatchIndex s) const;

  std::size_t node_count() const;
  std::size_t frequent_count(std::size_t level) const;
  std::vector<Episode> frequent(std::size_t level) const;  // sorted

  std::vector<NodeState> snapshot() const;  // sorted; count = latest ring entry

  // Empty when every structural invariant holds; otherwise one message per violation.
  std::vector<std::string> check_invariants() const;

  // "level<TAB>status<TAB>episode<TAB>s:c,s:c" per node, sorted.
  void dump(std::ostream& out, const SymbolTable* symbols = nullptr) const;

 private:
  std::size_t erase_subtree(const Episode& e);

  std::vector<Level> levels_;
  int window_length_;
};

std::vector<NodeState> snapshot_of(const MiningResult& mined);

}  // namespace epistream
