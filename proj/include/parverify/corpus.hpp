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

// Corpus loading, corpus-level scoring, ground-truth evaluation,
// distribution statistics and the accept/reject filter.

#ifndef PARVERIFY_CORPUS_HPP_
#define PARVERIFY_CORPUS_HPP_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parverify/bytes.hpp"
#include "parverify/error.hpp"
#include "parverify/metrics.hpp"
#include "parverify/parallel.hpp"
#include "parverify/preprocess.hpp"
#include "parverify/sentence_pair.hpp"
#include "parverify/snapshot.hpp"

namespace parverify {

inline constexpr char kUncategorized[] = "uncategorized";

struct Corpus {
  std::vector<SentencePair> pairs;
  std::vector<std::string> warnings;
};

enum class CorpusFormat { kTsv, kAligned };

inline CorpusFormat ParseCorpusFormat(std::string_view name) {
  if (name == "tsv") return CorpusFormat::kTsv;
  if (name == "aligned") return CorpusFormat::kAligned;
  throw ConfigError("unknown format '" + std::string(name) +
                    "' (expected tsv or aligned)");
}

namespace corpus_internal {

inline std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

inline std::string Where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line);
}

inline void CheckUtf8(std::string_view field, const std::string& where) {
  try {
    DecodeUtf8(field);
  } catch (const Error& e) {
    throw FormatError(where + ": " + e.what());
  }
}

}  // namespace corpus_internal

// TSV rows: id, arabic, english[, label[, category]]. A first row whose
// id field is literally "id" is treated as a header. Blank lines are
// skipped. An empty label or category field means "absent".
inline Corpus ParseTsv(std::string_view content, const std::string& source = "<tsv>") {
  using namespace corpus_internal;
  Corpus corpus;
  std::set<std::string, std::less<>> ids;
  const auto lines = SplitLines(content);
  bool first = true;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    const std::string where = Where(source, i + 1);
    const auto fields = SplitTabs(line);
    if (first) {
      first = false;
      if (fields[0] == "id") continue;
    }
    if (fields.size() < 3 || fields.size() > 5) {
      throw FormatError(where + ": expected 3 to 5 tab-separated fields, got " +
                        std::to_string(fields.size()));
    }
    for (auto f : fields) CheckUtf8(f, where);
    SentencePair pair;
    pair.id = std::string(fields[0]);
    if (pair.id.empty()) throw FormatError(where + ": empty id");
    if (!ids.insert(pair.id).second) {
      throw FormatError(where + ": duplicate id '" + pair.id + "'");
    }
    pair.text_a = std::string(fields[1]);
    pair.text_e = std::string(fields[2]);
    if (fields.size() >= 4 && !fields[3].empty()) {
      pair.label = ParseVerdict(fields[3]);
      if (!pair.label) {
        throw FormatError(where + ": invalid label '" + std::string(fields[3]) + "'");
      }
    }
    if (fields.size() == 5 && !fields[4].empty()) {
      pair.category = std::string(fields[4]);
    }
    corpus.pairs.push_back(std::move(pair));
  }
  if (corpus.pairs.empty()) corpus.warnings.push_back(source + ": no sentence pairs");
  return corpus;
}

inline Corpus LoadTsv(const std::filesystem::path& path) {
  return ParseTsv(ReadFileText(path), path.string());
}

// Zips two line-aligned files; ids are 1-based line numbers.
inline Corpus ParseAligned(std::string_view text_a, std::string_view text_e,
                           const std::string& source_a = "<arabic>",
                           const std::string& source_e = "<english>") {
  using namespace corpus_internal;
  const auto lines_a = SplitLines(text_a);
  const auto lines_e = SplitLines(text_e);
  if (lines_a.size() != lines_e.size()) {
    throw FormatError("line count mismatch: " + source_a + " has " +
                      std::to_string(lines_a.size()) + " lines, " + source_e +
                      " has " + std::to_string(lines_e.size()));
  }
  Corpus corpus;
  for (std::size_t i = 0; i < lines_a.size(); ++i) {
    for (const auto& [line, source] :
         {std::pair{lines_a[i], &source_a}, std::pair{lines_e[i], &source_e}}) {
      const std::string where = Where(*source, i + 1);
      CheckUtf8(line, where);
      if (line.find('\t') != std::string_view::npos) {
        throw FormatError(where + ": tab characters are not allowed");
      }
    }
    SentencePair pair;
    pair.id = std::to_string(i + 1);
    pair.text_a = std::string(lines_a[i]);
    pair.text_e = std::string(lines_e[i]);
    corpus.pairs.push_back(std::move(pair));
  }
  if (corpus.pairs.empty()) {
    corpus.warnings.push_back(source_a + ", " + source_e + ": no sentence pairs");
  }
  return corpus;
}

inline Corpus LoadAligned(const std::filesystem::path& path_a,
                          const std::filesystem::path& path_e) {
  return ParseAligned(ReadFileText(path_a), ReadFileText(path_e), path_a.string(),
                      path_e.string());
}

inline std::string FormatPairRow(const SentencePair& p) {
  std::string row = p.id + '\t' + p.text_a + '\t' + p.text_e;
  if (p.label || p.category) {
    row += '\t';
    if (p.label) row += VerdictName(*p.label);
  }
  if (p.category) row += '\t' + *p.category;
  return row;
}

inline std::string FormatCorpusTsv(std::span<const SentencePair> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += FormatPairRow(p);
    out += '\n';
  }
  return out;
}

// Scoring result of one pair: a score, or the reason it is invalid.
struct ScoreOutcome {
  std::optional<PairScore> score;
  std::string error;

  bool valid() const { return score.has_value(); }
};

inline std::vector<ScoreOutcome> ScoreCorpus(std::span<const SentencePair> pairs,
                                             const ModelSnapshot& model_a,
                                             const ModelSnapshot& model_e,
                                             const ThresholdConfig& thresholds,
                                             const ScoreOptions& options = {},
                                             unsigned jobs = 1) {
  thresholds.Validate();
  std::vector<ScoreOutcome> out(pairs.size());
  ParallelFor(pairs.size(), jobs, [&](std::size_t i) {
    try {
      out[i].score = ScorePair(pairs[i], model_a, model_e, thresholds, options);
    } catch (const InvalidPairError& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

struct EvalReport {
  double sat_accuracy = 0.0;    // percent
  double unsat_accuracy = 0.0;  // percent
  double average = 0.0;         // unweighted mean of the two
  std::size_t sat_total = 0;
  std::size_t unsat_total = 0;
  std::size_t sat_correct = 0;
  std::size_t unsat_correct = 0;
  std::size_t skipped_invalid = 0;
};

inline double UnweightedAverage(double sat_accuracy, double unsat_accuracy) {
  return (sat_accuracy + unsat_accuracy) / 2.0;
}

// Class accuracies of the threshold rule against ground-truth labels.
// Invalid pairs are skipped and counted.
inline EvalReport Evaluate(std::span<const SentencePair> labeled,
                           std::span<const ScoreOutcome> scores,
                           const ThresholdConfig& thresholds, MetricMode mode) {
  if (labeled.size() != scores.size()) {
    throw ConfigError("Evaluate: pairs and scores differ in size");
  }
  EvalReport r;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (!labeled[i].label) {
      throw FormatError("pair '" + labeled[i].id + "' has no label");
    }
    if (!scores[i].valid()) {
      ++r.skipped_invalid;
      continue;
    }
    const Verdict truth = *labeled[i].label;
    const Verdict got = Classify(scores[i].score->slr, scores[i].score->cr, thresholds, mode);
    if (truth == Verdict::kSatisfactory) {
      ++r.sat_total;
      r.sat_correct += got == truth;
    } else {
      ++r.unsat_total;
      r.unsat_correct += got == truth;
    }
  }
  if (r.sat_total == 0 || r.unsat_total == 0) {
    throw FormatError("evaluation needs valid pairs of both labels");
  }
  r.sat_accuracy = 100.0 * static_cast<double>(r.sat_correct) / static_cast<double>(r.sat_total);
  r.unsat_accuracy =
      100.0 * static_cast<double>(r.unsat_correct) / static_cast<double>(r.unsat_total);
  r.average = UnweightedAverage(r.sat_accuracy, r.unsat_accuracy);
  return r;
}

inline void CheckGrid(std::span<const double> grid, const char* name) {
  if (grid.empty()) throw ConfigError(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(std::isfinite(grid[i]) && grid[i] > 0.0)) {
      throw ConfigError(std::string(name) + " grid values must be finite and positive");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError(std::string(name) + " grid must be strictly increasing");
    }
  }
}

// Average accuracy of the combined rule; rows follow the CR grid, columns
// the SLR grid.
struct ThresholdMatrix {
  std::vector<double> slr_grid;
  std::vector<double> cr_grid;
  std::vector<std::vector<double>> average;  // [cr][slr]
};

inline ThresholdMatrix ComputeThresholdMatrix(std::span<const SentencePair> labeled,
                                              std::span<const ScoreOutcome> scores,
                                              std::span<const double> slr_grid,
                                              std::span<const double> cr_grid) {
  CheckGrid(slr_grid, "SLR");
  CheckGrid(cr_grid, "CR");
  ThresholdMatrix m;
  m.slr_grid.assign(slr_grid.begin(), slr_grid.end());
  m.cr_grid.assign(cr_grid.begin(), cr_grid.end());
  m.average.assign(cr_grid.size(), std::vector<double>(slr_grid.size()));
  for (std::size_t i = 0; i < cr_grid.size(); ++i) {
    for (std::size_t j = 0; j < slr_grid.size(); ++j) {
      m.average[i][j] =
          Evaluate(labeled, scores, ThresholdConfig{slr_grid[j], cr_grid[i]},
                   MetricMode::kBoth)
              .average;
    }
  }
  return m;
}

struct GreaterCounts {
  std::size_t pairs = 0;
  std::size_t len_a_greater = 0;
  std::size_t bits_a_greater = 0;

  double pct_len_a_greater() const {
    return pairs == 0 ? 0.0 : 100.0 * static_cast<double>(len_a_greater) / static_cast<double>(pairs);
  }
  double pct_bits_a_greater() const {
    return pairs == 0 ? 0.0 : 100.0 * static_cast<double>(bits_a_greater) / static_cast<double>(pairs);
  }
};

struct GreaterStats {
  GreaterCounts overall;
  std::map<std::string, GreaterCounts> per_category;
};

inline std::string CategoryOf(const SentencePair& p) {
  return p.category ? *p.category : kUncategorized;
}

// Share of valid pairs whose Arabic side is longer / costs more bits.
// Ties are not "greater".
inline GreaterStats ComputeGreaterStats(std::span<const SentencePair> pairs,
                                        std::span<const ScoreOutcome> scores) {
  if (pairs.size() != scores.size()) {
    throw ConfigError("ComputeGreaterStats: pairs and scores differ in size");
  }
  GreaterStats g;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!scores[i].valid()) continue;
    const PairScore& s = *scores[i].score;
    for (GreaterCounts* c : {&g.overall, &g.per_category[CategoryOf(pairs[i])]}) {
      ++c->pairs;
      c->len_a_greater += s.len_a > s.len_e;
      c->bits_a_greater += s.bits_a > s.bits_e;
    }
  }
  if (g.overall.pairs == 0) throw FormatError("statistics need at least one valid pair");
  return g;
}

struct CategoryCounts {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t invalid = 0;
};

struct FilterReport {
  std::size_t accepted_count = 0;
  std::size_t rejected_count = 0;
  std::size_t invalid_count = 0;
  double accepted_pct = 0.0;  // of valid pairs
  double rejected_pct = 0.0;
  std::map<std::string, CategoryCounts> per_category;
};

struct InvalidPair {
  SentencePair pair;
  std::string reason;
};

struct FilterResult {
  std::vector<SentencePair> accepted;
  std::vector<SentencePair> rejected;
  std::vector<InvalidPair> invalid;
  std::vector<ScoreOutcome> scores;
  FilterReport report;
};

// Partitions pairs by their verdicts, keeping input order in each part.
inline FilterResult PartitionScored(std::span<const SentencePair> pairs,
                                    std::vector<ScoreOutcome> scores) {
  if (pairs.size() != scores.size()) {
    throw ConfigError("PartitionScored: pairs and scores differ in size");
  }
  FilterResult r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CategoryCounts& cat = r.report.per_category[CategoryOf(pairs[i])];
    if (!scores[i].valid()) {
      r.invalid.push_back({pairs[i], scores[i].error});
      ++cat.invalid;
    } else if (scores[i].score->verdict == Verdict::kSatisfactory) {
      r.accepted.push_back(pairs[i]);
      ++cat.accepted;
    } else {
      r.rejected.push_back(pairs[i]);
      ++cat.rejected;
    }
  }
  r.report.accepted_count = r.accepted.size();
  r.report.rejected_count = r.rejected.size();
  r.report.invalid_count = r.invalid.size();
  const std::size_t valid = r.accepted.size() + r.rejected.size();
  if (valid > 0) {
    r.report.accepted_pct = 100.0 * static_cast<double>(r.accepted.size()) / static_cast<double>(valid);
    r.report.rejected_pct = 100.0 - r.report.accepted_pct;
  }
  r.scores = std::move(scores);
  return r;
}

inline FilterResult FilterCorpus(std::span<const SentencePair> pairs,
                                 const ModelSnapshot& model_a,
                                 const ModelSnapshot& model_e,
                                 const ThresholdConfig& thresholds,
                                 const ScoreOptions& options = {}, unsigned jobs = 1) {
  return PartitionScored(pairs,
                         ScoreCorpus(pairs, model_a, model_e, thresholds, options, jobs));
}

}  // namespace parverify

#endif  // PARVERIFY_CORPUS_HPP_
