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

// Lossless coding of symbol sequences under a PPM snapshot, and the ideal
// code length the metrics are computed from.
//
// Blob layout (all integers big-endian):
//   "PPMC" | version u8 (=1) | config hash u64 | symbol count u64 | payload

#ifndef PARVERIFY_ENTROPY_CODER_HPP_
#define PARVERIFY_ENTROPY_CODER_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "parverify/bytes.hpp"
#include "parverify/error.hpp"
#include "parverify/ppm_model.hpp"
#include "parverify/range_coder.hpp"
#include "parverify/snapshot.hpp"

namespace parverify {

inline constexpr char kBlobMagic[] = "PPMC";
inline constexpr std::uint8_t kBlobVersion = 1;

struct EncodedBlob {
  std::uint64_t config_hash = 0;
  std::uint64_t length = 0;  // symbols
  Bytes payload;

  std::size_t payload_bits() const { return payload.size() * 8; }
};

// Identifies the (model statistics, adapt flag) pair a blob was coded with.
inline std::uint64_t ConfigHash(const ModelSnapshot& snapshot, bool adapt) {
  Bytes key;
  PutBigEndian(key, snapshot.fingerprint(), 8);
  key.push_back(adapt ? 1 : 0);
  return Fnv1a64(key);
}

namespace coder_internal {

// Coded frequencies of one context: 2c-1 per symbol in symbol order, then
// t for the escape; the total is 2T. Contexts whose total exceeds the
// coder's 32-bit scale are downscaled as (f >> shift) + 1.
class ContextFrequencies {
 public:
  explicit ContextFrequencies(const ContextStats& stats) : stats_(stats) {
    const std::uint64_t exact = 2 * stats.total();
    const std::uint64_t slots = stats.distinct() + 1;
    while ((exact >> shift_) + slots > kMaxCodingTotal) ++shift_;
    if (shift_ == 0) {
      total_ = exact;
    } else {
      total_ = Scale(stats.distinct());
      for (const auto& e : stats.entries()) total_ += Scale(2 * e.count - 1);
    }
    escape_ = Scale(stats.distinct());
  }

  std::uint64_t total() const { return total_; }
  std::uint64_t escape_freq() const { return escape_; }
  std::uint64_t escape_cum() const { return total_ - escape_; }

  // Returns false if `s` has no entry (caller codes an escape instead).
  bool Locate(Symbol s, std::uint64_t& cum, std::uint64_t& freq) const {
    cum = 0;
    for (const auto& e : stats_.entries()) {
      const std::uint64_t f = Scale(2 * e.count - 1);
      if (e.symbol == s) {
        freq = f;
        return true;
      }
      if (e.symbol > s) return false;
      cum += f;
    }
    return false;
  }

  // Maps a decoder target to an entry index, or distinct() for the escape.
  std::size_t Find(std::uint64_t target, std::uint64_t& cum,
                   std::uint64_t& freq) const {
    cum = 0;
    const auto entries = stats_.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::uint64_t f = Scale(2 * entries[i].count - 1);
      if (target < cum + f) {
        freq = f;
        return i;
      }
      cum += f;
    }
    freq = escape_;
    return entries.size();
  }

 private:
  std::uint64_t Scale(std::uint64_t f) const {
    return shift_ == 0 ? f : (f >> shift_) + 1;
  }

  const ContextStats& stats_;
  unsigned shift_ = 0;
  std::uint64_t total_ = 0;
  std::uint64_t escape_ = 0;
};

}  // namespace coder_internal

// Sum of -log2 p over the escape chains of all symbols: the canonical
// code length, in bits.
inline double IdealBits(const ModelSnapshot& snapshot, std::span<const Symbol> text,
                        bool adapt = true) {
  ScoringSession session(snapshot, adapt);
  ProbabilityTrace trace;
  double bits = 0.0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto history = text.first(i);
    session.Estimate(history, text[i], trace);
    bits += trace.total_bits;
    session.Update(history, text[i]);
  }
  return bits;
}

inline EncodedBlob Encode(const ModelSnapshot& snapshot,
                          std::span<const Symbol> text, bool adapt = true) {
  const PpmModel& model = snapshot.model();
  for (Symbol s : text) model.CheckSymbol(s);
  ScoringSession session(snapshot, adapt);
  RangeEncoder encoder;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto history = text.first(i);
    const Symbol next = text[i];
    const ContextChain chain = session.Resolve(history);
    bool coded = false;
    for (std::size_t k = chain.size(); k-- > 0 && !coded;) {
      const ContextStats* stats = chain[k];
      if (stats == nullptr || !stats->seen()) continue;
      coder_internal::ContextFrequencies freqs(*stats);
      std::uint64_t cum = 0, freq = 0;
      if (freqs.Locate(next, cum, freq)) {
        encoder.Encode(cum, freq, freqs.total());
        coded = true;
      } else {
        encoder.Encode(freqs.escape_cum(), freqs.escape_freq(), freqs.total());
      }
    }
    if (!coded) encoder.Encode(next, 1, model.alphabet_size());
    session.Update(history, next);
  }
  EncodedBlob blob;
  blob.config_hash = ConfigHash(snapshot, adapt);
  blob.length = text.size();
  blob.payload = std::move(encoder).Finish();
  return blob;
}

inline std::vector<Symbol> Decode(const ModelSnapshot& snapshot,
                                  const EncodedBlob& blob, bool adapt = true) {
  if (blob.config_hash != ConfigHash(snapshot, adapt)) {
    throw CorruptError("blob was encoded with a different model or adapt flag");
  }
  const PpmModel& model = snapshot.model();
  if (blob.length == 0) {
    if (!blob.payload.empty()) throw CorruptError("payload present for empty text");
    return {};
  }
  if (blob.payload.empty()) throw CorruptError("empty payload");
  ScoringSession session(snapshot, adapt);
  RangeDecoder decoder(blob.payload);
  std::vector<Symbol> text;
  text.reserve(static_cast<std::size_t>(
      std::min<std::uint64_t>(blob.length, std::uint64_t{1} << 24)));
  for (std::uint64_t i = 0; i < blob.length; ++i) {
    const std::span<const Symbol> history(text);
    const ContextChain chain = session.Resolve(history);
    bool decoded = false;
    Symbol next = 0;
    for (std::size_t k = chain.size(); k-- > 0 && !decoded;) {
      const ContextStats* stats = chain[k];
      if (stats == nullptr || !stats->seen()) continue;
      coder_internal::ContextFrequencies freqs(*stats);
      const std::uint64_t target = decoder.Target(freqs.total());
      if (target >= freqs.total()) throw CorruptError("payload out of range");
      std::uint64_t cum = 0, freq = 0;
      const std::size_t index = freqs.Find(target, cum, freq);
      decoder.Consume(cum, freq);
      if (index < stats->distinct()) {
        next = stats->entries()[index].symbol;
        decoded = true;
      }
    }
    if (!decoded) {
      const std::uint64_t target = decoder.Target(model.alphabet_size());
      if (target >= model.alphabet_size()) throw CorruptError("payload out of range");
      decoder.Consume(target, 1);
      next = static_cast<Symbol>(target);
    }
    session.Update(history, next);
    text.push_back(next);
  }
  if (decoder.shifts() + 1 != blob.payload.size()) {
    throw CorruptError("payload length does not match decoded content");
  }
  return text;
}

inline Bytes SerializeBlob(const EncodedBlob& blob) {
  Bytes out(kBlobMagic, kBlobMagic + 4);
  out.push_back(kBlobVersion);
  PutBigEndian(out, blob.config_hash, 8);
  PutBigEndian(out, blob.length, 8);
  out.insert(out.end(), blob.payload.begin(), blob.payload.end());
  return out;
}

inline EncodedBlob ParseBlob(std::span<const std::uint8_t> data) {
  ByteReader in(data, "blob");
  const auto magic = in.Take(4);
  if (!std::equal(magic.begin(), magic.end(), kBlobMagic)) {
    throw FormatError("blob: bad magic (expected PPMC)");
  }
  const auto version = in.BigEndian(1);
  if (version != kBlobVersion) {
    throw FormatError("blob: unsupported version " + std::to_string(version));
  }
  EncodedBlob blob;
  blob.config_hash = in.BigEndian(8);
  blob.length = in.BigEndian(8);
  const auto rest = in.Take(in.remaining());
  blob.payload.assign(rest.begin(), rest.end());
  return blob;
}

}  // namespace parverify

#endif  // PARVERIFY_ENTROPY_CODER_HPP_
