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

#ifndef PARVERIFY_PREPROCESS_HPP_
#define PARVERIFY_PREPROCESS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parverify/error.hpp"
#include "parverify/ppm_model.hpp"

namespace parverify {

// Strict UTF-8 decoding: rejects overlong forms, surrogates, code points
// above U+10FFFF and truncated sequences.
inline std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n;) {
    const unsigned char b = p[i];
    char32_t cp;
    std::size_t len;
    char32_t min;
    if (b < 0x80) {
      out.push_back(b);
      ++i;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      cp = b & 0x1F, len = 2, min = 0x80;
    } else if ((b & 0xF0) == 0xE0) {
      cp = b & 0x0F, len = 3, min = 0x800;
    } else if ((b & 0xF8) == 0xF0) {
      cp = b & 0x07, len = 4, min = 0x10000;
    } else {
      throw FormatError("malformed UTF-8 at byte " + std::to_string(i));
    }
    if (i + len > n) throw FormatError("truncated UTF-8 at byte " + std::to_string(i));
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) {
        throw FormatError("malformed UTF-8 at byte " + std::to_string(i + k));
      }
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      throw FormatError("invalid UTF-8 code point at byte " + std::to_string(i));
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void AppendUtf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline std::string EncodeUtf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) AppendUtf8(out, cp);
  return out;
}

// Number of code points; the sentence length unit.
inline std::size_t CharLength(std::string_view utf8) {
  return DecodeUtf8(utf8).size();
}

// Arabic single-byte recoding.
//
//   U+0600..U+067F        -> one byte, cp - 0x0600 + 0x80
//   U+0000..U+007E        -> the same byte
//   anything else, U+007F -> 0x7F followed by the code point as 3 bytes
//
// Arabic letters drop from two UTF-8 bytes to one, so contexts of the same
// order span twice as many characters.
inline constexpr std::uint8_t kNumericEscape = 0x7F;

inline std::vector<std::uint8_t> ArabicToNumeric(std::u32string_view text) {
  std::vector<std::uint8_t> out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp >= 0x0600 && cp <= 0x067F) {
      out.push_back(static_cast<std::uint8_t>(cp - 0x0600 + 0x80));
    } else if (cp < kNumericEscape) {
      out.push_back(static_cast<std::uint8_t>(cp));
    } else {
      out.push_back(kNumericEscape);
      out.push_back(static_cast<std::uint8_t>(cp >> 16));
      out.push_back(static_cast<std::uint8_t>(cp >> 8));
      out.push_back(static_cast<std::uint8_t>(cp));
    }
  }
  return out;
}

inline std::vector<std::uint8_t> ArabicToNumeric(std::string_view utf8) {
  return ArabicToNumeric(DecodeUtf8(utf8));
}

// Inverse of ArabicToNumeric. Escapes that the forward transform would
// never produce are rejected, keeping the mapping a bijection.
inline std::u32string NumericToArabic(std::span<const std::uint8_t> bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size();) {
    const std::uint8_t b = bytes[i];
    if (b >= 0x80) {
      out.push_back(static_cast<char32_t>(b - 0x80 + 0x0600));
      ++i;
    } else if (b != kNumericEscape) {
      out.push_back(b);
      ++i;
    } else {
      if (i + 4 > bytes.size()) {
        throw FormatError("truncated escape sequence at byte " + std::to_string(i));
      }
      const char32_t cp = (char32_t{bytes[i + 1]} << 16) |
                          (char32_t{bytes[i + 2]} << 8) | bytes[i + 3];
      const bool direct = cp < kNumericEscape || (cp >= 0x0600 && cp <= 0x067F);
      if (direct || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        throw FormatError("invalid escaped code point at byte " + std::to_string(i));
      }
      out.push_back(cp);
      i += 4;
    }
  }
  return out;
}

enum class Transform { kIdentity, kArabicNumeric };

inline const char* TransformName(Transform t) {
  return t == Transform::kIdentity ? "identity" : "arabic-numeric";
}

inline Transform ParseTransform(std::string_view name) {
  if (name == "identity") return Transform::kIdentity;
  if (name == "arabic-numeric") return Transform::kArabicNumeric;
  throw ConfigError("unknown transform '" + std::string(name) +
                    "' (expected identity or arabic-numeric)");
}

struct PreparedText {
  std::u32string original;
  std::size_t char_length = 0;
  std::vector<Symbol> symbols;  // what the model sees
  Transform transform = Transform::kIdentity;
};

// Models over more than 256 symbols see code points; byte models see the
// transform output (UTF-8 bytes for identity).
inline PreparedText Prepare(std::string_view utf8, Transform transform,
                            std::uint32_t alphabet_size = kByteAlphabet) {
  PreparedText prepared;
  prepared.original = DecodeUtf8(utf8);
  prepared.char_length = prepared.original.size();
  prepared.transform = transform;
  if (transform == Transform::kArabicNumeric) {
    const auto bytes = ArabicToNumeric(std::u32string_view(prepared.original));
    prepared.symbols.assign(bytes.begin(), bytes.end());
  } else if (alphabet_size > kByteAlphabet) {
    prepared.symbols.assign(prepared.original.begin(), prepared.original.end());
  } else {
    prepared.symbols.assign(utf8.begin(), utf8.end());
    for (auto& s : prepared.symbols) s &= 0xFF;  // char may be signed
  }
  return prepared;
}

// Inverse of Prepare's symbol mapping; returns UTF-8 text.
inline std::string Restore(std::span<const Symbol> symbols, Transform transform,
                           std::uint32_t alphabet_size = kByteAlphabet) {
  if (transform == Transform::kArabicNumeric) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(symbols.size());
    for (Symbol s : symbols) {
      if (s > 0xFF) throw FormatError("non-byte symbol in numeric stream");
      bytes.push_back(static_cast<std::uint8_t>(s));
    }
    return EncodeUtf8(NumericToArabic(bytes));
  }
  if (alphabet_size > kByteAlphabet) {
    std::u32string cps(symbols.begin(), symbols.end());
    return EncodeUtf8(cps);
  }
  std::string out;
  out.reserve(symbols.size());
  for (Symbol s : symbols) out.push_back(static_cast<char>(s));
  return out;
}

}  // namespace parverify

#endif  // PARVERIFY_PREPROCESS_HPP_
