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

#ifndef PARVERIFY_SNAPSHOT_HPP_
#define PARVERIFY_SNAPSHOT_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>

#include "parverify/bytes.hpp"
#include "parverify/model_io.hpp"
#include "parverify/ppm_model.hpp"

namespace parverify {

// Immutable, shareable view of a trained model. The fingerprint is the
// FNV-1a hash of the canonical PPMV1 dump and identifies the statistics.
class ModelSnapshot {
 public:
  explicit ModelSnapshot(PpmModel model)
      : model_(std::make_shared<const PpmModel>(std::move(model))),
        fingerprint_(Fnv1a64(SerializeModel(*model_))) {}

  const PpmModel& model() const { return *model_; }
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::shared_ptr<const PpmModel> model_;
  std::uint64_t fingerprint_;
};

inline ModelSnapshot Snapshot(const PpmModel& model) { return ModelSnapshot(model); }

// Private adaptive state layered over a snapshot.
//
// The overlay is a trie of the contexts this session has updated. A
// context is copied from the base on first touch and then counted in
// place, so the base is never written and a lookup needs only one of
// the two tries per order. With adapt off, Update is a no-op and the
// session reads the base directly.
class ScoringSession {
 public:
  using NodeId = ContextTrie::NodeId;

  ScoringSession(const ModelSnapshot& snapshot, bool adapt)
      : snapshot_(snapshot), base_(&snapshot_.model()), adapt_(adapt) {
    overlay_.MutableStats(ContextTrie::root()) =
        base_->trie().Stats(ContextTrie::root());
  }

  ScoringSession(const ScoringSession&) = delete;
  ScoringSession& operator=(const ScoringSession&) = delete;

  const PpmModel& base() const { return *base_; }
  bool adapt() const { return adapt_; }

  // Context statistics for orders 0..min(d, |history|). Valid until the
  // next Update.
  ContextChain Resolve(std::span<const Symbol> history) {
    const unsigned top = base_->OrderFor(history.size());
    base_->Walk(history, base_nodes_);
    NodeId over = ContextTrie::root();
    for (unsigned k = 0; k <= top; ++k) {
      if (k > 0 && over != ContextTrie::kNoNode) {
        over = overlay_.Child(over, history[history.size() - k]);
      }
      if (over != ContextTrie::kNoNode) {
        chain_[k] = &overlay_.Stats(over);
      } else if (base_nodes_[k] != ContextTrie::kNoNode) {
        chain_[k] = &base_->trie().Stats(base_nodes_[k]);
      } else {
        chain_[k] = nullptr;
      }
    }
    return ContextChain(chain_.data(), top + 1);
  }

  void Estimate(std::span<const Symbol> history, Symbol next,
                ProbabilityTrace& out) {
    base_->CheckSymbol(next);
    EstimateFromChain(Resolve(history), next, base_->alphabet_size(), out);
  }

  void Update(std::span<const Symbol> history, Symbol observed) {
    if (!adapt_) return;
    base_->CheckSymbol(observed);
    const unsigned top = base_->OrderFor(history.size());
    base_->Walk(history, base_nodes_);
    NodeId over = ContextTrie::root();
    overlay_.MutableStats(over).Add(observed);
    for (unsigned k = 1; k <= top; ++k) {
      const Symbol s = history[history.size() - k];
      NodeId next = overlay_.Child(over, s);
      if (next == ContextTrie::kNoNode) {
        next = overlay_.ChildOrAdd(over, s);
        if (base_nodes_[k] != ContextTrie::kNoNode) {
          overlay_.MutableStats(next) = base_->trie().Stats(base_nodes_[k]);
        }
      }
      overlay_.MutableStats(next).Add(observed);
      over = next;
    }
  }

 private:
  ModelSnapshot snapshot_;  // keeps the base alive
  const PpmModel* base_;
  bool adapt_;
  ContextTrie overlay_;
  std::array<NodeId, kMaxSupportedOrder + 1> base_nodes_{};
  std::array<const ContextStats*, kMaxSupportedOrder + 1> chain_{};
};

}  // namespace parverify

#endif  // PARVERIFY_SNAPSHOT_HPP_
