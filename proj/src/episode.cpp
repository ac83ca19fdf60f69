#include "epistream/episode.hpp"

#include <algorithm>

namespace epistream {

Episode::Episode(std::initializer_list<EventType> nodes) : Episode(std::span<const EventType>(nodes.begin(), nodes.size())) {}

Episode::Episode(std::span<const EventType> nodes) {
  if (nodes.size() > kMaxEpisodeLength)
    throw std::length_error("episode longer than " + std::to_string(kMaxEpisodeLength) + " nodes");
  std::copy(nodes.begin(), nodes.end(), nodes_.begin());
  size_ = nodes.size();
}

Episode Episode::prefix() const { return without(size_ - 1); }

Episode Episode::suffix() const { return without(0); }

Episode Episode::without(std::size_t pos) const {
  Episode out;
  for (std::size_t i = 0; i < size_; ++i)
    if (i != pos) out.nodes_[out.size_++] = nodes_[i];
  return out;
}

Episode Episode::appended(EventType t) const {
  if (size_ == kMaxEpisodeLength) throw std::length_error("episode too long");
  Episode out = *this;
  out.nodes_[out.size_++] = t;
  return out;
}

Episode Episode::prepended(EventType t) const {
  if (size_ == kMaxEpisodeLength) throw std::length_error("episode too long");
  Episode out;
  out.nodes_[0] = t;
  std::copy(nodes_.begin(), nodes_.begin() + size_, out.nodes_.begin() + 1);
  out.size_ = size_ + 1;
  return out;
}

std::size_t Episode::hash() const {
  // FNV-1a over the node ids.
  std::uint64_t h = 1469598103934665603ULL ^ size_;
  for (std::size_t i = 0; i < size_; ++i) {
    h ^= nodes_[i];
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 29));
}

std::string to_string(const Episode& e, const SymbolTable* symbols) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) out += "->";
    out += symbols ? symbols->name(e[i]) : std::to_string(e[i]);
  }
  return out;
}

Episode parse_episode(std::string_view text, const SymbolTable& symbols) {
  std::vector<EventType> nodes;
  while (true) {
    const auto arrow = text.find("->");
    nodes.push_back(symbols.id(text.substr(0, arrow)));
    if (arrow == std::string_view::npos) break;
    text.remove_prefix(arrow + 2);
  }
  return Episode(nodes);
}

bool is_subsequence(const Episode& sub, const Episode& super) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < super.size() && j < sub.size(); ++i)
    if (super[i] == sub[j]) ++j;
  return j == sub.size();
}

std::vector<Episode> maximal_subepisodes(const Episode& e) {
  if (e.size() < 2) throw std::domain_error("maximal_subepisodes needs an episode of length >= 2");
  std::vector<Episode> out;
  out.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    // Deleting either node of a run of equal types gives the same subepisode.
    if (i > 0 && e[i] == e[i - 1]) continue;
    out.push_back(e.without(i));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Episode> serial_join(const Episode& a, const Episode& b) {
  if (a.size() != b.size() || a.empty()) throw std::domain_error("serial_join needs two episodes of equal length");
  if (a.suffix() != b.prefix()) return std::nullopt;
  return a.appended(b.back());
}

namespace {

bool closed_under(const Episode& candidate, const EpisodeSet& frequent) {
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (i > 0 && candidate[i] == candidate[i - 1]) continue;
    if (!frequent.count(candidate.without(i))) return false;
  }
  return true;
}

void finish(CandidateSet& out) {
  std::sort(out.episodes.begin(), out.episodes.end());
  out.episodes.erase(std::unique(out.episodes.begin(), out.episodes.end()), out.episodes.end());
}

}  // namespace

CandidateSet generate_candidates(const EpisodeSet& frequent, const std::optional<EpisodeSet>& fresh) {
  CandidateSet out;
  if (frequent.empty()) return out;
  const std::size_t level = frequent.begin()->size();
  out.level = level + 1;
  for (const auto& e : frequent)
    if (e.size() != level) throw std::domain_error("generate_candidates: mixed episode lengths");
  if (fresh)
    for (const auto& e : *fresh)
      if (!frequent.count(e)) throw std::domain_error("generate_candidates: fresh set is not a subset of the frequent set");

  if (level == 1) {
    if (!fresh) {
      for (const auto& a : frequent)
        for (const auto& b : frequent) {
          ++out.join_attempts;
          out.episodes.push_back(a.appended(b.front()));
        }
    } else {
      for (const auto& d : *fresh)
        for (const auto& x : frequent) {
          ++out.join_attempts;
          out.episodes.push_back(d.appended(x.front()));
          out.episodes.push_back(x.appended(d.front()));
        }
    }
    finish(out);
    return out;
  }

  EpisodeMap<std::vector<const Episode*>> by_prefix;
  for (const auto& x : frequent) by_prefix[x.prefix()].push_back(&x);

  if (!fresh) {
    for (const auto& a : frequent) {
      auto it = by_prefix.find(a.suffix());
      if (it == by_prefix.end()) continue;
      for (const Episode* b : it->second) {
        ++out.join_attempts;
        Episode candidate = a.appended(b->back());
        if (closed_under(candidate, frequent)) out.episodes.push_back(candidate);
      }
    }
    finish(out);
    return out;
  }

  // Every candidate with a fresh maximal subepisode d is either d + x.back()
  // (d is its prefix, x its suffix) or x + d.back() where d.prefix() is a
  // maximal subepisode of x.
  EpisodeMap<std::vector<const Episode*>> by_sub;
  for (const auto& x : frequent)
    for (const auto& sub : maximal_subepisodes(x)) by_sub[sub].push_back(&x);

  std::vector<const Episode*> partners;
  for (const auto& d : *fresh) {
    partners.clear();
    if (auto it = by_prefix.find(d.suffix()); it != by_prefix.end())
      for (const Episode* x : it->second) {
        partners.push_back(x);
        Episode candidate = d.appended(x->back());
        if (closed_under(candidate, frequent)) out.episodes.push_back(candidate);
      }
    if (auto it = by_sub.find(d.prefix()); it != by_sub.end())
      for (const Episode* x : it->second) {
        partners.push_back(x);
        Episode candidate = x->appended(d.back());
        if (closed_under(candidate, frequent)) out.episodes.push_back(candidate);
      }
    std::sort(partners.begin(), partners.end());
    out.join_attempts += static_cast<std::size_t>(std::unique(partners.begin(), partners.end()) - partners.begin());
  }
  finish(out);
  return out;
}

}  // namespace epistream
