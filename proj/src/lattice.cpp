#include "epistream/lattice.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "epistream/levelwise.hpp"

namespace epistream {

const char* to_string(NodeStatus status) { return status == NodeStatus::Frequent ? "frequent" : "border"; }

void CountRing::push(BatchIndex s, Count c) {
  if (!entries_.empty() && entries_.back().first >= s) {
    if (entries_.back().first == s) {
      entries_.back().second = c;
      return;
    }
    throw std::logic_error("CountRing: batch indices must increase");
  }
  if (entries_.size() == capacity_) entries_.erase(entries_.begin());
  entries_.emplace_back(s, c);
}

void CountRing::keep_latest() {
  if (entries_.size() > 1) entries_.erase(entries_.begin(), entries_.end() - 1);
}

void CountRing::drop_before(BatchIndex first) {
  std::erase_if(entries_, [first](const auto& e) { return e.first < first; });
}

Count CountRing::sum(BatchIndex first, BatchIndex last) const {
  Count total = 0;
  for (const auto& [s, c] : entries_)
    if (s >= first && s <= last) total += c;
  return total;
}

std::optional<Count> CountRing::at(BatchIndex s) const {
  for (const auto& [b, c] : entries_)
    if (b == s) return c;
  return std::nullopt;
}

std::optional<std::pair<BatchIndex, Count>> CountRing::latest() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.back();
}

PatternLattice::PatternLattice(std::size_t max_level, int window_length)
    : levels_(max_level), window_length_(window_length) {
  if (max_level == 0) throw ConfigError("lattice needs at least one level");
  if (window_length < 1) throw ConfigError("window length must be >= 1");
}

PatternLattice PatternLattice::from_mining(const MiningResult& mined, int window_length, BatchIndex s) {
  PatternLattice lattice(mined.levels.size(), window_length);
  for (const auto& level : mined.levels) {
    for (const auto& [e, c] : level.frequent) lattice.promote(e, c, s);
    for (const auto& [e, c] : level.border) lattice.record_border(e, c, s);
  }
  return lattice;
}

LatticeNode* PatternLattice::find(const Episode& e) {
  if (e.empty() || e.size() > levels_.size()) return nullptr;
  auto& level = levels_[e.size() - 1];
  auto it = level.find(e);
  return it == level.end() ? nullptr : &it->second;
}

const LatticeNode* PatternLattice::find(const Episode& e) const {
  return const_cast<PatternLattice*>(this)->find(e);
}

LatticeNode& PatternLattice::insert(const Episode& e, NodeStatus status) {
  if (e.empty() || e.size() > levels_.size()) throw std::out_of_range("episode size outside lattice levels");
  auto [it, inserted] = levels_[e.size() - 1].try_emplace(e);
  LatticeNode& node = it->second;
  if (!inserted) return node;
  node.episode = e;
  node.status = status;
  node.ring = CountRing(static_cast<std::size_t>(window_length_));
  if (e.size() >= 2)
    for (const auto& sub : maximal_subepisodes(e))
      if (LatticeNode* parent = find(sub)) parent->children.push_back(e);
  return node;
}

void PatternLattice::promote(const Episode& e, Count c, BatchIndex s) {
  LatticeNode* node = find(e);
  if (!node) node = &insert(e, NodeStatus::Frequent);
  node->status = NodeStatus::Frequent;
  node->ring.push(s, c);
  node->ring.drop_before(s - window_length_ + 1);
  node->last_counted = s;
}

void PatternLattice::record_border(const Episode& e, Count c, BatchIndex s) {
  LatticeNode* node = find(e);
  if (!node) node = &insert(e, NodeStatus::Border);
  node->status = NodeStatus::Border;
  node->ring.push(s, c);
  node->ring.keep_latest();
  node->last_counted = s;
}

std::size_t PatternLattice::demote_to_border(const Episode& e, BatchIndex s) {
  LatticeNode* node = find(e);
  if (!node) return 0;
  node->status = NodeStatus::Border;
  node->ring.keep_latest();
  node->ring.drop_before(s - window_length_ + 1);
  auto children = std::move(node->children);
  node->children.clear();
  std::size_t removed = 0;
  for (const auto& child : children) removed += erase_subtree(child);
  return removed;
}

std::size_t PatternLattice::erase_subtree(const Episode& e) {
  LatticeNode* node = find(e);
  if (!node) return 0;
  auto children = std::move(node->children);
  std::size_t removed = 1;
  for (const auto& child : children) removed += erase_subtree(child);
  if (e.size() >= 2)
    for (const auto& sub : maximal_subepisodes(e))
      if (LatticeNode* parent = find(sub)) std::erase(parent->children, e);
  levels_[e.size() - 1].erase(e);
  return removed;
}

WindowFrequency PatternLattice::window_frequency(const Episode& e, const Window& w) const {
  const LatticeNode* node = find(e);
  if (!node) return {};
  return {node->ring.sum(w.first_batch, w.end_batch), true};
}

TopK PatternLattice::top_k(std::size_t level, std::size_t k, BatchIndex s) const {
  std::vector<Ranked> candidates;
  for (const auto& [e, node] : this->level(level)) {
    if (node.status != NodeStatus::Frequent) continue;
    if (auto c = node.ring.at(s)) candidates.push_back({e, *c});
  }
  return rank_top_k(std::move(candidates), k);
}

std::size_t PatternLattice::node_count() const {
  std::size_t n = 0;
  for (const auto& level : levels_) n += level.size();
  return n;
}

std::size_t PatternLattice::frequent_count(std::size_t level) const {
  std::size_t n = 0;
  for (const auto& [e, node] : this->level(level)) n += node.status == NodeStatus::Frequent;
  return n;
}

std::vector<Episode> PatternLattice::frequent(std::size_t level) const {
  std::vector<Episode> out;
  for (const auto& [e, node] : this->level(level))
    if (node.status == NodeStatus::Frequent) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeState> PatternLattice::snapshot() const {
  std::vector<NodeState> out;
  for (std::size_t i = 0; i < levels_.size(); ++i)
    for (const auto& [e, node] : levels_[i]) {
      const auto latest = node.ring.latest();
      out.push_back({i + 1, node.status, e, latest ? latest->second : 0});
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> PatternLattice::check_invariants() const {
  std::vector<std::string> problems;
  const auto frequent_at = [&](const Episode& e) {
    const LatticeNode* n = find(e);
    return n && n->status == NodeStatus::Frequent;
  };
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    for (const auto& [e, node] : levels_[i]) {
      const std::string name = epistream::to_string(e);
      const auto& entries = node.ring.entries();
      if (entries.size() > static_cast<std::size_t>(window_length_)) problems.push_back(name + ": ring over capacity");
      for (std::size_t j = 1; j < entries.size(); ++j)
        if (entries[j - 1].first >= entries[j].first) problems.push_back(name + ": ring not increasing");
      if (e.size() >= 2)
        for (const auto& sub : maximal_subepisodes(e))
          if (!frequent_at(sub))
            problems.push_back(name + ": subepisode " + epistream::to_string(sub) + " is not frequent");
      if (node.status == NodeStatus::Border)
        for (const auto& child : node.children)
          if (contains(child)) problems.push_back(name + ": border node has a descendant");
    }
  }
  return problems;
}

void PatternLattice::dump(std::ostream& out, const SymbolTable* symbols) const {
  std::vector<const LatticeNode*> nodes;
  for (const auto& level : levels_)
    for (const auto& [e, node] : level) nodes.push_back(&node);
  std::sort(nodes.begin(), nodes.end(), [](const LatticeNode* a, const LatticeNode* b) {
    if (a->episode.size() != b->episode.size()) return a->episode.size() < b->episode.size();
    return a->episode < b->episode;
  });
  for (const LatticeNode* node : nodes) {
    out << node->episode.size() << '\t' << to_string(node->status) << '\t' << to_string(node->episode, symbols) << '\t';
    bool first = true;
    for (const auto& [s, c] : node->ring.entries()) {
      out << (first ? "" : ",") << s << ':' << c;
      first = false;
    }
    out << '\n';
  }
}

std::vector<NodeState> snapshot_of(const MiningResult& mined) {
  std::vector<NodeState> out;
  for (std::size_t i = 0; i < mined.levels.size(); ++i) {
    for (const auto& [e, c] : mined.levels[i].frequent) out.push_back({i + 1, NodeStatus::Frequent, e, c});
    for (const auto& [e, c] : mined.levels[i].border) out.push_back({i + 1, NodeStatus::Border, e, c});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace epistream
