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

// Binary model dump.
//
//   "PPMV1"                  5 bytes magic
//   max_order                u32 big-endian
//   alphabet_size            u32 big-endian
//   node_count               u64 big-endian
//   root node                (see below)
//
// A node is written as
//   entry_count              u32, then entry_count x (symbol u32, count u64)
//   child_count              u32, then child_count x (symbol u32, node)
// in preorder with entries and children sorted by symbol, so two models
// with identical statistics serialize to identical bytes regardless of
// the order in which they were trained.

#ifndef PARVERIFY_MODEL_IO_HPP_
#define PARVERIFY_MODEL_IO_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "parverify/bytes.hpp"
#include "parverify/error.hpp"
#include "parverify/ppm_model.hpp"

namespace parverify {

inline constexpr char kModelMagic[] = "PPMV1";

namespace model_io_internal {

inline void WriteNode(const ContextTrie& trie, ContextTrie::NodeId node,
                      Bytes& out) {
  const ContextStats& stats = trie.Stats(node);
  PutBigEndian(out, stats.entries().size(), 4);
  for (const SymbolCount& e : stats.entries()) {
    PutBigEndian(out, e.symbol, 4);
    PutBigEndian(out, e.count, 8);
  }
  const auto kids = trie.Children(node);
  PutBigEndian(out, kids.size(), 4);
  for (const auto& edge : kids) {
    PutBigEndian(out, edge.symbol, 4);
    WriteNode(trie, edge.node, out);
  }
}

inline void ReadNode(ByteReader& in, PpmModel& model, ContextTrie::NodeId node,
                     unsigned depth, std::uint64_t& nodes_read) {
  ++nodes_read;
  ContextTrie& trie = model.mutable_trie();
  const auto entries = in.BigEndian(4);
  if (entries > model.alphabet_size()) {
    throw FormatError("model: more entries than alphabet symbols");
  }
  std::int64_t previous = -1;
  for (std::uint64_t i = 0; i < entries; ++i) {
    const auto symbol = static_cast<Symbol>(in.BigEndian(4));
    const auto count = in.BigEndian(8);
    if (symbol >= model.alphabet_size() ||
        static_cast<std::int64_t>(symbol) <= previous || count == 0) {
      throw FormatError("model: invalid or unsorted context entry");
    }
    previous = symbol;
    trie.MutableStats(node).Add(symbol, count);
  }
  if (node != ContextTrie::root() && entries == 0) {
    throw FormatError("model: non-root context without observations");
  }
  const auto kids = in.BigEndian(4);
  if (kids > 0 && depth >= model.max_order()) {
    throw FormatError("model: context deeper than max order");
  }
  previous = -1;
  for (std::uint64_t i = 0; i < kids; ++i) {
    const auto symbol = static_cast<Symbol>(in.BigEndian(4));
    if (symbol >= model.alphabet_size() ||
        static_cast<std::int64_t>(symbol) <= previous) {
      throw FormatError("model: invalid or unsorted child symbol");
    }
    previous = symbol;
    const auto child = trie.ChildOrAdd(node, symbol);
    ReadNode(in, model, child, depth + 1, nodes_read);
  }
}

}  // namespace model_io_internal

inline Bytes SerializeModel(const PpmModel& model) {
  Bytes out(kModelMagic, kModelMagic + 5);
  PutBigEndian(out, model.max_order(), 4);
  PutBigEndian(out, model.alphabet_size(), 4);
  PutBigEndian(out, model.context_count(), 8);
  model_io_internal::WriteNode(model.trie(), ContextTrie::root(), out);
  return out;
}

inline PpmModel DeserializeModel(std::span<const std::uint8_t> data) {
  ByteReader in(data, "model");
  const auto magic = in.Take(5);
  if (!std::equal(magic.begin(), magic.end(), kModelMagic)) {
    throw FormatError("model: bad magic (expected PPMV1)");
  }
  const auto order = in.BigEndian(4);
  const auto alphabet = in.BigEndian(4);
  if (order > kMaxSupportedOrder || alphabet < 2) {
    throw FormatError("model: unsupported order or alphabet");
  }
  const auto declared_nodes = in.BigEndian(8);
  PpmModel model(static_cast<unsigned>(order), static_cast<std::uint32_t>(alphabet));
  std::uint64_t nodes_read = 0;
  model_io_internal::ReadNode(in, model, ContextTrie::root(), 0, nodes_read);
  if (nodes_read != declared_nodes) {
    throw FormatError("model: node count mismatch");
  }
  if (!in.done()) throw FormatError("model: trailing bytes");
  return model;
}

inline void SaveModel(const PpmModel& model, const std::filesystem::path& path) {
  WriteFileBytes(path, SerializeModel(model));
}

inline PpmModel LoadModel(const std::filesystem::path& path) {
  try {
    return DeserializeModel(ReadFileBytes(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace parverify

#endif  // PARVERIFY_MODEL_IO_HPP_
