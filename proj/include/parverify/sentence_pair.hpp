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

#ifndef PARVERIFY_SENTENCE_PAIR_HPP_
#define PARVERIFY_SENTENCE_PAIR_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "parverify/error.hpp"

namespace parverify {

enum class Verdict { kSatisfactory, kUnsatisfactory };

inline const char* VerdictName(Verdict v) {
  return v == Verdict::kSatisfactory ? "satisfactory" : "unsatisfactory";
}

// Accepts satisfactory/unsatisfactory or sat/unsat, any case.
inline std::optional<Verdict> ParseVerdict(std::string_view token) {
  std::string lower(token);
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (lower == "satisfactory" || lower == "sat") return Verdict::kSatisfactory;
  if (lower == "unsatisfactory" || lower == "unsat") return Verdict::kUnsatisfactory;
  return std::nullopt;
}

// One aligned sentence pair. Texts are UTF-8.
struct SentencePair {
  std::string id;
  std::string text_a;  // Arabic side
  std::string text_e;  // English side
  std::optional<Verdict> label;
  std::optional<std::string> category;

  friend bool operator==(const SentencePair&, const SentencePair&) = default;
};

}  // namespace parverify

#endif  // PARVERIFY_SENTENCE_PAIR_HPP_
