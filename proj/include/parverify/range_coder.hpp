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

// THE RANGE CODER
//
// A byte-oriented range coder with a 64-bit low register and a 64-bit
// range kept in [2^56, 2^64) by renormalization. Frequency totals are at
// most 2^32, so the per-step truncation loss is below 2^-24 of the range
// and the coded length tracks the ideal code length to a small fraction
// of a bit per thousand symbols.
//
// Output goes to an in-memory buffer, which makes carry propagation a
// simple walk back over the already emitted bytes. The flush writes one
// byte: the top byte of the smallest multiple of 2^56 inside the final
// interval. The decoder reads zeros past the end of the payload, so that
// value is exactly the one it sees.

#ifndef PARVERIFY_RANGE_CODER_HPP_
#define PARVERIFY_RANGE_CODER_HPP_

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace parverify {

inline constexpr std::uint64_t kMaxCodingTotal = std::uint64_t{1} << 32;

class RangeEncoder {
 public:
  void Encode(std::uint64_t cum, std::uint64_t freq, std::uint64_t total) {
    assert(freq > 0 && cum + freq <= total && total <= kMaxCodingTotal);
    const std::uint64_t r = range_ / total;
    const std::uint64_t next_low = low_ + r * cum;
    if (next_low < low_) PropagateCarry();
    low_ = next_low;
    range_ = r * freq;
    while (range_ < kTop) {
      out_.push_back(static_cast<std::uint8_t>(low_ >> 56));
      low_ <<= 8;
      range_ <<= 8;
    }
    used_ = true;
  }

  // Number of bytes emitted by renormalization so far.
  std::size_t bytes_emitted() const { return out_.size(); }

  std::vector<std::uint8_t> Finish() && {
    if (used_) {
      constexpr std::uint64_t kMask = kTop - 1;
      std::uint64_t value = low_;
      if ((value & kMask) != 0) {
        value = (value | kMask) + 1;
        if (value == 0) PropagateCarry();
      }
      out_.push_back(static_cast<std::uint8_t>(value >> 56));
    }
    return std::move(out_);
  }

 private:
  static constexpr std::uint64_t kTop = std::uint64_t{1} << 56;

  void PropagateCarry() {
    for (std::size_t i = out_.size(); i-- > 0;) {
      if (++out_[i] != 0) return;
    }
    assert(false && "carry out of the code value");
  }

  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~std::uint64_t{0};
  std::vector<std::uint8_t> out_;
  bool used_ = false;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const std::uint8_t> payload) : in_(payload) {
    for (int i = 0; i < 8; ++i) code_ = (code_ << 8) | NextByte();
  }

  // Cumulative frequency the next symbol falls on. A value >= total
  // means the stream is not a valid encoding.
  std::uint64_t Target(std::uint64_t total) {
    step_ = range_ / total;
    return (code_ - low_) / step_;
  }

  void Consume(std::uint64_t cum, std::uint64_t freq) {
    low_ += step_ * cum;
    range_ = step_ * freq;
    while (range_ < kTop) {
      low_ <<= 8;
      range_ <<= 8;
      code_ = (code_ << 8) | NextByte();
      ++shifts_;
    }
  }

  // Renormalization shifts performed; equals the encoder's emitted byte
  // count for a well-formed stream.
  std::size_t shifts() const { return shifts_; }

 private:
  static constexpr std::uint64_t kTop = std::uint64_t{1} << 56;

  std::uint8_t NextByte() { return pos_ < in_.size() ? in_[pos_++] : 0; }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint64_t low_ = 0;
  std::uint64_t range_ = ~std::uint64_t{0};
  std::uint64_t code_ = 0;
  std::uint64_t step_ = 1;
  std::size_t shifts_ = 0;
};

}  // namespace parverify

#endif  // PARVERIFY_RANGE_CODER_HPP_
