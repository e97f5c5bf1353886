// Copyright 2026 The parverify Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Adaptive fixed-order PPM context model with PPMD estimation.
//
// Contexts are stored in a trie keyed by the *reversed* context: the root
// is the empty (order-0) context, its child along symbol x is the order-1
// context "x", whose child along y is the order-2 context "yx", and so
// on. The parent of every node is therefore its one-shorter suffix, which
// makes the "every context's suffix is also present" invariant structural,
// and all contexts of a history are found in a single walk from the root
// along the history read backwards.
//
// Each node holds the statistics of symbols that followed its context:
// per-symbol counts c, the number of distinct symbols t and the total T.
// PPMD assigns a seen symbol (2c - 1) / 2T and the escape t / 2T, so the
// integer frequencies (2c - 1 for each symbol, t for the escape) sum to
// exactly 2T. No exclusions are applied and counts are never rescaled.

#ifndef PARVERIFY_PPM_MODEL_HPP_
#define PARVERIFY_PPM_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "parverify/error.hpp"
#include "parverify/rational.hpp"

namespace parverify {

using Symbol = std::uint32_t;

inline constexpr std::uint32_t kByteAlphabet = 256;
inline constexpr std::uint32_t kUnicodeAlphabet = 0x110000;
inline constexpr unsigned kDefaultOrder = 5;
inline constexpr unsigned kMaxSupportedOrder = 64;

// PPMD probability of a symbol seen c times in a context seen T times.
inline Rational SymbolProbability(std::uint64_t c, std::uint64_t total) {
  if (c == 0 || total == 0 || c > total) {
    throw std::invalid_argument("SymbolProbability: need 1 <= c <= T");
  }
  return Rational(2 * c - 1, 2 * total);
}

// PPMD escape probability for t distinct symbols over T observations.
inline Rational EscapeProbability(std::uint64_t distinct, std::uint64_t total) {
  if (distinct == 0 || total == 0 || distinct > total) {
    throw std::invalid_argument("EscapeProbability: need 1 <= t <= T");
  }
  return Rational(distinct, 2 * total);
}

struct SymbolCount {
  Symbol symbol;
  std::uint64_t count;

  friend bool operator==(const SymbolCount&, const SymbolCount&) = default;
};

// Counts of the symbols that followed one context. Entries stay sorted by
// symbol so iteration order (and therefore coding order) is canonical.
class ContextStats {
 public:
  std::uint64_t total() const { return total_; }
  std::size_t distinct() const { return entries_.size(); }
  bool seen() const { return total_ > 0; }
  std::span<const SymbolCount> entries() const { return entries_; }

  std::uint64_t count(Symbol s) const {
    auto it = Find(s);
    return it != entries_.end() && it->symbol == s ? it->count : 0;
  }

  void Add(Symbol s, std::uint64_t n = 1) {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), s,
        [](const SymbolCount& e, Symbol v) { return e.symbol < v; });
    if (it != entries_.end() && it->symbol == s) {
      it->count += n;
    } else {
      entries_.insert(it, SymbolCount{s, n});
    }
    total_ += n;
  }

  friend bool operator==(const ContextStats&, const ContextStats&) = default;

 private:
  std::vector<SymbolCount>::const_iterator Find(Symbol s) const {
    return std::lower_bound(
        entries_.begin(), entries_.end(), s,
        [](const SymbolCount& e, Symbol v) { return e.symbol < v; });
  }

  std::vector<SymbolCount> entries_;
  std::uint64_t total_ = 0;
};

class ContextTrie {
 public:
  using NodeId = std::uint32_t;
  static constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

  struct Edge {
    Symbol symbol;
    NodeId node;
  };

  ContextTrie() { nodes_.emplace_back(); }

 private:
  template <typename Vec>
  static auto LowerBound(Vec& kids, Symbol s) {
    return std::lower_bound(kids.begin(), kids.end(), s,
                            [](const Edge& e, Symbol v) { return e.symbol < v; });
  }

 public:

  static constexpr NodeId root() { return 0; }
  std::size_t size() const { return nodes_.size(); }

  NodeId Child(NodeId parent, Symbol s) const {
    const auto& kids = nodes_[parent].children;
    auto it = LowerBound(kids, s);
    return it != kids.end() && it->symbol == s ? it->node : kNoNode;
  }

  NodeId ChildOrAdd(NodeId parent, Symbol s) {
    auto& kids = nodes_[parent].children;
    auto it = LowerBound(kids, s);
    if (it != kids.end() && it->symbol == s) return it->node;
    if (nodes_.size() >= kNoNode) {
      throw std::length_error("ContextTrie: node limit reached");
    }
    const auto id = static_cast<NodeId>(nodes_.size());
    kids.insert(it, Edge{s, id});
    nodes_.emplace_back();  // invalidates `kids`
    return id;
  }

  std::span<const Edge> Children(NodeId node) const {
    return nodes_[node].children;
  }

  const ContextStats& Stats(NodeId node) const { return nodes_[node].stats; }
  ContextStats& MutableStats(NodeId node) { return nodes_[node].stats; }

 private:
  struct Node {
    ContextStats stats;
    std::vector<Edge> children;
  };

  std::vector<Node> nodes_;
};

enum class StepKind { kSymbol, kEscape, kDeterministicEscape };

struct TraceStep {
  int order;  // -1 for the uniform fallback
  StepKind kind;
  Rational probability;
};

// The escape chain used to predict one symbol.
struct ProbabilityTrace {
  std::vector<TraceStep> steps;
  double total_bits = 0.0;

  void Clear() {
    steps.clear();
    total_bits = 0.0;
  }
};

// Statistics for orders 0..size()-1 of one history; nullptr marks an
// unseen context. Index is the order.
using ContextChain = std::span<const ContextStats* const>;

// Runs the PPMD escape chain from the highest order in `chain` down to the
// order -1 uniform model.
inline void EstimateFromChain(ContextChain chain, Symbol next,
                              std::uint32_t alphabet_size,
                              ProbabilityTrace& out) {
  out.Clear();
  for (int order = static_cast<int>(chain.size()) - 1; order >= 0; --order) {
    const ContextStats* stats = chain[static_cast<std::size_t>(order)];
    if (stats == nullptr || !stats->seen()) {
      out.steps.push_back({order, StepKind::kDeterministicEscape, Rational(1, 1)});
      continue;
    }
    if (const std::uint64_t c = stats->count(next); c > 0) {
      const Rational p = SymbolProbability(c, stats->total());
      out.steps.push_back({order, StepKind::kSymbol, p});
      out.total_bits += p.Bits();
      return;
    }
    const Rational e = EscapeProbability(stats->distinct(), stats->total());
    out.steps.push_back({order, StepKind::kEscape, e});
    out.total_bits += e.Bits();
  }
  const Rational uniform(1, alphabet_size);
  out.steps.push_back({-1, StepKind::kSymbol, uniform});
  out.total_bits += uniform.Bits();
}

class PpmModel {
 public:
  using NodeId = ContextTrie::NodeId;

  explicit PpmModel(unsigned max_order = kDefaultOrder,
                    std::uint32_t alphabet_size = kByteAlphabet)
      : max_order_(max_order), alphabet_size_(alphabet_size) {
    if (max_order > kMaxSupportedOrder) {
      throw ConfigError("model order must be at most " +
                        std::to_string(kMaxSupportedOrder));
    }
    if (alphabet_size < 2) {
      throw ConfigError("alphabet size must be at least 2");
    }
  }

  unsigned max_order() const { return max_order_; }
  std::uint32_t alphabet_size() const { return alphabet_size_; }
  const ContextTrie& trie() const { return trie_; }
  ContextTrie& mutable_trie() { return trie_; }

  // Order-0 total: the number of symbols the model has been trained on.
  std::uint64_t symbols_seen() const {
    return trie_.Stats(ContextTrie::root()).total();
  }
  std::size_t context_count() const { return trie_.size(); }

  void CheckSymbol(Symbol s) const {
    if (s >= alphabet_size_) {
      throw FormatError("symbol " + std::to_string(s) +
                        " outside alphabet of size " +
                        std::to_string(alphabet_size_));
    }
  }

  // Highest order usable for a history of this length.
  unsigned OrderFor(std::size_t history_length) const {
    return static_cast<unsigned>(
        std::min<std::size_t>(max_order_, history_length));
  }

  // Fills out[k] with the node of the length-k suffix of `history` for
  // k = 0..OrderFor(|history|), kNoNode once a context is absent.
  void Walk(std::span<const Symbol> history, std::span<NodeId> out) const {
    const unsigned top = OrderFor(history.size());
    NodeId node = ContextTrie::root();
    out[0] = node;
    for (unsigned k = 1; k <= top; ++k) {
      node = node == ContextTrie::kNoNode
                 ? node
                 : trie_.Child(node, history[history.size() - k]);
      out[k] = node;
    }
  }

  // Returns the statistics of an exact context, or nullptr if unseen.
  const ContextStats* Find(std::span<const Symbol> context) const {
    if (context.size() > max_order_) return nullptr;
    NodeId node = ContextTrie::root();
    for (std::size_t i = context.size(); i-- > 0;) {
      node = trie_.Child(node, context[i]);
      if (node == ContextTrie::kNoNode) return nullptr;
    }
    const ContextStats& s = trie_.Stats(node);
    return s.seen() ? &s : nullptr;
  }

  // Counts `observed` in every suffix context of `history` of order
  // 0..min(d, |history|).
  void Update(std::span<const Symbol> history, Symbol observed) {
    CheckSymbol(observed);
    const unsigned top = OrderFor(history.size());
    NodeId node = ContextTrie::root();
    trie_.MutableStats(node).Add(observed);
    for (unsigned k = 1; k <= top; ++k) {
      node = trie_.ChildOrAdd(node, history[history.size() - k]);
      trie_.MutableStats(node).Add(observed);
    }
  }

  // Trains on one text; the history starts empty.
  void Train(std::span<const Symbol> text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      Update(text.first(i), text[i]);
    }
  }

  void Estimate(std::span<const Symbol> history, Symbol next,
                ProbabilityTrace& out) const {
    CheckSymbol(next);
    std::array<NodeId, kMaxSupportedOrder + 1> nodes;
    std::array<const ContextStats*, kMaxSupportedOrder + 1> chain;
    const unsigned top = OrderFor(history.size());
    Walk(history, nodes);
    for (unsigned k = 0; k <= top; ++k) {
      chain[k] = nodes[k] == ContextTrie::kNoNode ? nullptr : &trie_.Stats(nodes[k]);
    }
    EstimateFromChain(ContextChain(chain.data(), top + 1), next, alphabet_size_, out);
  }

  ProbabilityTrace Estimate(std::span<const Symbol> history, Symbol next) const {
    ProbabilityTrace trace;
    Estimate(history, next, trace);
    return trace;
  }

 private:
  unsigned max_order_;
  std::uint32_t alphabet_size_;
  ContextTrie trie_;
};

}  // namespace parverify

#endif  // PARVERIFY_PPM_MODEL_HPP_
