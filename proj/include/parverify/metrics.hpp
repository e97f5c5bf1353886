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

#ifndef PARVERIFY_METRICS_HPP_
#define PARVERIFY_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "parverify/entropy_coder.hpp"
#include "parverify/error.hpp"
#include "parverify/preprocess.hpp"
#include "parverify/sentence_pair.hpp"
#include "parverify/snapshot.hpp"

namespace parverify {

// Bits per character.
inline double CrossEntropy(double bits, std::size_t length) {
  if (length == 0) throw std::invalid_argument("CrossEntropy: zero length");
  return bits / static_cast<double>(length);
}

// Ratio of two code lengths. Equal to (n/m) * (H_x / H_y) for texts of
// lengths n and m, since n * H_x is the code length of x.
inline double CodeRatio(double bits_x, double bits_y) {
  if (!(bits_x > 0.0) || !(bits_y > 0.0)) {
    throw std::invalid_argument("CodeRatio: code lengths must be positive");
  }
  return bits_x / bits_y;
}

inline double Cr(double bits_a, double bits_e) {
  return std::max(CodeRatio(bits_a, bits_e), CodeRatio(bits_e, bits_a));
}

inline double Slr(std::size_t len_a, std::size_t len_e) {
  if (len_a == 0 || len_e == 0) {
    throw std::invalid_argument("Slr: sentence lengths must be positive");
  }
  const auto a = static_cast<double>(len_a);
  const auto e = static_cast<double>(len_e);
  return std::max(a / e, e / a);
}

struct ThresholdConfig {
  double theta_slr = 2.5;
  double theta_cr = 2.25;

  void Validate() const {
    if (!(std::isfinite(theta_slr) && theta_slr > 0.0 &&
          std::isfinite(theta_cr) && theta_cr > 0.0)) {
      throw ConfigError("thresholds must be finite and positive");
    }
  }
};

enum class MetricMode { kSlr, kCr, kBoth };

inline MetricMode ParseMetricMode(const std::string& name) {
  if (name == "slr") return MetricMode::kSlr;
  if (name == "cr") return MetricMode::kCr;
  if (name == "both") return MetricMode::kBoth;
  throw ConfigError("unknown metric '" + name + "' (expected slr, cr or both)");
}

inline const char* MetricModeName(MetricMode m) {
  switch (m) {
    case MetricMode::kSlr: return "slr";
    case MetricMode::kCr: return "cr";
    case MetricMode::kBoth: return "both";
  }
  return "?";
}

// A pair is rejected when a metric in use exceeds (is strictly greater
// than) its threshold.
inline Verdict Classify(double slr, double cr, const ThresholdConfig& t,
                        MetricMode mode = MetricMode::kBoth) {
  const bool slr_ok = mode == MetricMode::kCr || slr <= t.theta_slr;
  const bool cr_ok = mode == MetricMode::kSlr || cr <= t.theta_cr;
  return slr_ok && cr_ok ? Verdict::kSatisfactory : Verdict::kUnsatisfactory;
}

struct PairScore {
  std::string id;
  std::size_t len_a = 0;
  std::size_t len_e = 0;
  double bits_a = 0.0;
  double bits_e = 0.0;
  double h_a = 0.0;
  double h_e = 0.0;
  double slr = 1.0;
  double cr = 1.0;
  Verdict verdict = Verdict::kSatisfactory;
};

struct ScoreOptions {
  Transform transform_a = Transform::kArabicNumeric;
  Transform transform_e = Transform::kIdentity;
  bool adapt = true;
};

// Raised for a pair the metrics are undefined on (an empty side).
class InvalidPairError : public Error {
 public:
  explicit InvalidPairError(const std::string& what)
      : Error(ErrorKind::kInputFormat, what) {}
};

inline PairScore ScorePair(const SentencePair& pair, const ModelSnapshot& model_a,
                           const ModelSnapshot& model_e,
                           const ThresholdConfig& thresholds,
                           const ScoreOptions& options = {}) {
  if (pair.text_a.empty()) throw InvalidPairError("empty Arabic side");
  if (pair.text_e.empty()) throw InvalidPairError("empty English side");
  PreparedText a;
  PreparedText e;
  try {
    a = Prepare(pair.text_a, options.transform_a, model_a.model().alphabet_size());
    e = Prepare(pair.text_e, options.transform_e, model_e.model().alphabet_size());
  } catch (const Error& err) {
    throw InvalidPairError(err.what());
  }
  PairScore s;
  s.id = pair.id;
  s.len_a = a.char_length;
  s.len_e = e.char_length;
  try {
    s.bits_a = IdealBits(model_a, a.symbols, options.adapt);
    s.bits_e = IdealBits(model_e, e.symbols, options.adapt);
  } catch (const Error& err) {
    throw InvalidPairError(err.what());
  }
  s.h_a = CrossEntropy(s.bits_a, s.len_a);
  s.h_e = CrossEntropy(s.bits_e, s.len_e);
  s.slr = Slr(s.len_a, s.len_e);
  s.cr = Cr(s.bits_a, s.bits_e);
  s.verdict = Classify(s.slr, s.cr, thresholds);
  return s;
}

inline std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

inline constexpr char kScoreHeader[] =
    "id\tlen_a\tlen_e\tbits_a\tbits_e\tslr\tcr\tverdict";

// id, len_a, len_e, bits_a, bits_e, slr, cr, verdict. Bits, SLR and CR
// use four decimals.
inline std::string FormatScoreRow(const PairScore& s) {
  std::string row = s.id;
  row += '\t' + std::to_string(s.len_a);
  row += '\t' + std::to_string(s.len_e);
  row += '\t' + FormatFixed(s.bits_a, 4);
  row += '\t' + FormatFixed(s.bits_e, 4);
  row += '\t' + FormatFixed(s.slr, 4);
  row += '\t' + FormatFixed(s.cr, 4);
  row += '\t';
  row += VerdictName(s.verdict);
  return row;
}

}  // namespace parverify

#endif  // PARVERIFY_METRICS_HPP_
