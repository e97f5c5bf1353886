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

// parverify: score, evaluate and filter Arabic-English sentence pairs with
// the sentence-length ratio and the PPM code-length ratio.
//
//   parverify train    --out model.ppm [--order 5] [--transform T] FILE...
//   parverify score    [model/threshold flags] INPUT...
//   parverify evaluate [--metric slr|cr|both] INPUT...
//   parverify sweep    [--grid 1.25:3.50:0.25] INPUT...
//   parverify filter   --out-dir DIR INPUT...
//   parverify stats    INPUT...
//   parverify compress / decompress --model M IN OUT
//
// INPUT is one TSV file (--format tsv) or an Arabic and an English file
// with one sentence per line (--format aligned).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bundled_corpus.hpp"
#include "parverify.hpp"

namespace fs = std::filesystem;
using namespace parverify;

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitInputFormat = 3,
  kExitIo = 4,
};

struct RunConfig {
  // models
  std::string model_a;
  std::string model_e;
  unsigned order = kDefaultOrder;
  std::string alphabet = "byte";
  std::string transform = "arabic-numeric";  // Arabic side when scoring
  std::string text_transform = "identity";  // train, compress, decompress
  bool no_adapt = false;
  // thresholds
  double theta_slr = 2.5;
  double theta_cr = 2.25;
  std::string metric = "both";
  std::string grid = "1.25:3.50:0.25";
  unsigned jobs = DefaultJobs();
  // inputs and outputs
  std::string format = "tsv";
  std::vector<std::string> inputs;
  std::string out;
  std::string invalid_out;
  std::string scatter_out;
  std::string out_dir;
  bool per_line = false;
};

std::uint32_t ParseAlphabet(const std::string& s) {
  if (s == "byte") return kByteAlphabet;
  if (s == "unicode") return kUnicodeAlphabet;
  try {
    std::size_t pos = 0;
    const unsigned long v = std::stoul(s, &pos);
    if (pos == s.size() && v >= 2 && v <= 0xFFFFFFFFul) return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid --alphabet '" + s + "' (byte, unicode or an integer >= 2)");
}

// "start:stop:step" or a comma-separated list.
std::vector<double> ParseGrid(const std::string& text) {
  std::vector<double> grid;
  auto number = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("invalid number '" + s + "' in --grid");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("--grid range must be start:stop:step");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || stop < start) throw ConfigError("--grid range is empty");
    const auto steps = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
      grid.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) grid.push_back(number(p));
  }
  CheckGrid(grid, "--grid");
  return grid;
}

Corpus LoadInputs(const RunConfig& cfg) {
  const CorpusFormat format = ParseCorpusFormat(cfg.format);
  Corpus corpus;
  if (format == CorpusFormat::kTsv) {
    if (cfg.inputs.size() != 1) throw ConfigError("--format tsv takes one input file");
    corpus = LoadTsv(cfg.inputs[0]);
  } else {
    if (cfg.inputs.size() != 2) {
      throw ConfigError("--format aligned takes an Arabic and an English file");
    }
    corpus = LoadAligned(cfg.inputs[0], cfg.inputs[1]);
  }
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
  return corpus;
}

struct LoadedModels {
  ModelSnapshot a;
  ModelSnapshot e;
  std::string source_a;
  std::string source_e;
};

ModelSnapshot BundledModel(const unsigned char* data, std::size_t size, unsigned order,
                           Transform transform) {
  PpmModel model(order, kByteAlphabet);
  TrainDocument(model, std::string_view(reinterpret_cast<const char*>(data), size),
                transform);
  return ModelSnapshot(std::move(model));
}

LoadedModels LoadModels(const RunConfig& cfg, const ScoreOptions& options) {
  auto load = [&](const std::string& path, const unsigned char* data, std::size_t size,
                  Transform transform) {
    return path.empty() ? BundledModel(data, size, cfg.order, transform)
                        : ModelSnapshot(LoadModel(path));
  };
  return LoadedModels{
      load(cfg.model_a, bundled::kBundledArabic, bundled::kBundledArabic_size,
           options.transform_a),
      load(cfg.model_e, bundled::kBundledEnglish, bundled::kBundledEnglish_size,
           options.transform_e),
      cfg.model_a.empty() ? "bundled:arabic" : cfg.model_a,
      cfg.model_e.empty() ? "bundled:english" : cfg.model_e,
  };
}

ScoreOptions OptionsFrom(const RunConfig& cfg) {
  ScoreOptions o;
  o.transform_a = ParseTransform(cfg.transform);
  o.transform_e = Transform::kIdentity;
  o.adapt = !cfg.no_adapt;
  return o;
}

ThresholdConfig ThresholdsFrom(const RunConfig& cfg) {
  ThresholdConfig t{cfg.theta_slr, cfg.theta_cr};
  t.Validate();
  return t;
}

// Opens `path` for writing, or returns std::cout for "" / "-".
class Output {
 public:
  explicit Output(const std::string& path, std::ostream& fallback = std::cout) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot write " + path);
      stream_ = &file_;
      path_ = path;
    }
  }
  std::ostream& operator*() { return *stream_; }
  void Close() {
    stream_->flush();
    if (!*stream_) throw IoError("error writing " + (path_.empty() ? "output" : path_));
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
  std::string path_;
};

int CmdTrain(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("train needs --out");
  const Transform transform = ParseTransform(cfg.text_transform);
  PpmModel model(cfg.order, ParseAlphabet(cfg.alphabet));
  for (const auto& path : cfg.inputs) {
    const std::string text = ReadFileText(path);
    try {
      TrainDocument(model, text, transform, cfg.per_line);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kIo) throw;
      throw FormatError(path + ": " + e.what());
    }
  }
  SaveModel(model, cfg.out);
  const ModelSnapshot snap(std::move(model));
  std::cout << "symbols\t" << snap.model().symbols_seen() << "\n"
            << "order0_total\t" << snap.model().symbols_seen() << "\n"
            << "order\t" << snap.model().max_order() << "\n"
            << "alphabet\t" << snap.model().alphabet_size() << "\n"
            << "contexts\t" << snap.model().context_count() << "\n"
            << "fingerprint\t" << HexFingerprint(snap.fingerprint()) << "\n";
  return kExitOk;
}

int CmdScore(const RunConfig& cfg) {
  const ThresholdConfig thresholds = ThresholdsFrom(cfg);
  const ScoreOptions options = OptionsFrom(cfg);
  const Corpus corpus = LoadInputs(cfg);
  const LoadedModels models = LoadModels(cfg, options);
  const auto scores =
      ScoreCorpus(corpus.pairs, models.a, models.e, thresholds, options, cfg.jobs);

  Output out(cfg.out);
  Output invalid(cfg.invalid_out, std::cerr);
  std::optional<Output> scatter;
  if (!cfg.scatter_out.empty()) scatter.emplace(cfg.scatter_out);
  *out << kScoreHeader << "\n";
  if (scatter) **scatter << "len_a\tlen_e\tbits_a\tbits_e\tverdict\n";
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!scores[i].valid()) {
      *invalid << corpus.pairs[i].id << "\t" << scores[i].error << "\n";
      continue;
    }
    const PairScore& s = *scores[i].score;
    *out << FormatScoreRow(s) << "\n";
    if (scatter) {
      **scatter << s.len_a << "\t" << s.len_e << "\t" << FormatFixed(s.bits_a, 4) << "\t"
                << FormatFixed(s.bits_e, 4) << "\t" << VerdictName(s.verdict) << "\n";
    }
  }
  out.Close();
  invalid.Close();
  if (scatter) scatter->Close();
  return kExitOk;
}

int CmdEvaluate(const RunConfig& cfg) {
  const ThresholdConfig thresholds = ThresholdsFrom(cfg);
  const ScoreOptions options = OptionsFrom(cfg);
  const MetricMode mode = ParseMetricMode(cfg.metric);
  const Corpus corpus = LoadInputs(cfg);
  const LoadedModels models = LoadModels(cfg, options);
  const auto scores =
      ScoreCorpus(corpus.pairs, models.a, models.e, thresholds, options, cfg.jobs);
  const EvalReport r = Evaluate(corpus.pairs, scores, thresholds, mode);
  Output out(cfg.out);
  *out << "metric\t" << MetricModeName(mode) << "\n"
       << "theta_slr\t" << FormatFixed(thresholds.theta_slr, 2) << "\n"
       << "theta_cr\t" << FormatFixed(thresholds.theta_cr, 2) << "\n"
       << "satisfactory_pairs\t" << r.sat_total << "\n"
       << "unsatisfactory_pairs\t" << r.unsat_total << "\n"
       << "invalid_pairs\t" << r.skipped_invalid << "\n"
       << "sat_accuracy\t" << FormatFixed(r.sat_accuracy, 2) << "\n"
       << "unsat_accuracy\t" << FormatFixed(r.unsat_accuracy, 2) << "\n"
       << "average\t" << FormatFixed(r.average, 2) << "\n";
  out.Close();
  return kExitOk;
}

int CmdSweep(const RunConfig& cfg) {
  const ScoreOptions options = OptionsFrom(cfg);
  const std::vector<double> grid = ParseGrid(cfg.grid);
  const Corpus corpus = LoadInputs(cfg);
  const LoadedModels models = LoadModels(cfg, options);
  const auto scores =
      ScoreCorpus(corpus.pairs, models.a, models.e, ThresholdsFrom(cfg), options, cfg.jobs);
  const ThresholdMatrix m = ComputeThresholdMatrix(corpus.pairs, scores, grid, grid);
  Output out(cfg.out);
  *out << "CR\\SLR";
  for (double s : m.slr_grid) *out << "\t" << FormatFixed(s, 2);
  *out << "\n";
  for (std::size_t i = 0; i < m.cr_grid.size(); ++i) {
    *out << FormatFixed(m.cr_grid[i], 2);
    for (double v : m.average[i]) *out << "\t" << FormatFixed(v, 2);
    *out << "\n";
  }
  out.Close();
  return kExitOk;
}

int CmdFilter(const RunConfig& cfg) {
  if (cfg.out_dir.empty()) throw ConfigError("filter needs --out-dir");
  const ThresholdConfig thresholds = ThresholdsFrom(cfg);
  const ScoreOptions options = OptionsFrom(cfg);
  const Corpus corpus = LoadInputs(cfg);
  const LoadedModels models = LoadModels(cfg, options);
  const FilterResult r =
      FilterCorpus(corpus.pairs, models.a, models.e, thresholds, options, cfg.jobs);

  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  WriteFileText(dir / "accepted.tsv", FormatCorpusTsv(r.accepted));
  WriteFileText(dir / "rejected.tsv", FormatCorpusTsv(r.rejected));
  std::string invalid;
  for (const auto& bad : r.invalid) invalid += FormatPairRow(bad.pair) + "\n";
  WriteFileText(dir / "invalid.tsv", invalid);
  const auto report = FilterReportJson(r.report, thresholds, {models.source_a, &models.a},
                                       {models.source_e, &models.e}, options);
  WriteFileText(dir / "report.json", report.dump(2) + "\n");
  std::cout << "accepted\t" << r.report.accepted_count << "\t"
            << FormatFixed(r.report.accepted_pct, 2) << "%\n"
            << "rejected\t" << r.report.rejected_count << "\t"
            << FormatFixed(r.report.rejected_pct, 2) << "%\n"
            << "invalid\t" << r.report.invalid_count << "\n";
  return kExitOk;
}

int CmdStats(const RunConfig& cfg) {
  const ScoreOptions options = OptionsFrom(cfg);
  const Corpus corpus = LoadInputs(cfg);
  const LoadedModels models = LoadModels(cfg, options);
  const auto scores =
      ScoreCorpus(corpus.pairs, models.a, models.e, ThresholdsFrom(cfg), options, cfg.jobs);
  const GreaterStats g = ComputeGreaterStats(corpus.pairs, scores);
  Output out(cfg.out);
  *out << "category\tpairs\tpct_len_a_greater\tpct_bits_a_greater\n";
  for (const auto& [name, c] : g.per_category) {
    *out << name << "\t" << c.pairs << "\t" << FormatFixed(c.pct_len_a_greater(), 2) << "\t"
         << FormatFixed(c.pct_bits_a_greater(), 2) << "\n";
  }
  *out << "average\t" << g.overall.pairs << "\t"
       << FormatFixed(g.overall.pct_len_a_greater(), 2) << "\t"
       << FormatFixed(g.overall.pct_bits_a_greater(), 2) << "\n";
  out.Close();
  return kExitOk;
}

ModelSnapshot CoderModel(const RunConfig& cfg) {
  if (cfg.model_a.empty()) throw ConfigError("--model is required");
  return ModelSnapshot(LoadModel(cfg.model_a));
}

int CmdCompress(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) throw ConfigError("compress takes IN and OUT");
  const ModelSnapshot model = CoderModel(cfg);
  const Transform transform = ParseTransform(cfg.text_transform);
  const std::string text = ReadFileText(cfg.inputs[0]);
  std::vector<Symbol> symbols;
  if (transform == Transform::kIdentity && model.model().alphabet_size() <= kByteAlphabet) {
    symbols.assign(text.begin(), text.end());  // raw bytes, no UTF-8 requirement
    for (auto& s : symbols) s &= 0xFF;
  } else {
    symbols = Prepare(text, transform, model.model().alphabet_size()).symbols;
  }
  const EncodedBlob blob = Encode(model, symbols, !cfg.no_adapt);
  WriteFileBytes(cfg.inputs[1], SerializeBlob(blob));
  std::cout << "symbols\t" << blob.length << "\n"
            << "payload_bits\t" << blob.payload_bits() << "\n"
            << "ideal_bits\t" << FormatFixed(IdealBits(model, symbols, !cfg.no_adapt), 4)
            << "\n";
  return kExitOk;
}

int CmdDecompress(const RunConfig& cfg) {
  if (cfg.inputs.size() != 2) throw ConfigError("decompress takes IN and OUT");
  const ModelSnapshot model = CoderModel(cfg);
  const Transform transform = ParseTransform(cfg.text_transform);
  const EncodedBlob blob = ParseBlob(ReadFileBytes(cfg.inputs[0]));
  const std::vector<Symbol> symbols = Decode(model, blob, !cfg.no_adapt);
  WriteFileText(cfg.inputs[1], Restore(symbols, transform, model.model().alphabet_size()));
  return kExitOk;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return kExitConfig;
    case ErrorKind::kInputFormat: return kExitInputFormat;
    case ErrorKind::kCorrupt: return kExitInputFormat;
    case ErrorKind::kIo: return kExitIo;
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify Arabic-English sentence pairs with length and code-length ratios"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--model-a", cfg.model_a, "Arabic model file (default: bundled corpus)");
    cmd->add_option("--model-e", cfg.model_e, "English model file (default: bundled corpus)");
    cmd->add_option("--order", cfg.order, "Order of the bundled models")->capture_default_str();
    cmd->add_option("--transform", cfg.transform, "Arabic-side transform")
        ->check(CLI::IsMember({"identity", "arabic-numeric"}))
        ->capture_default_str();
    cmd->add_flag("--no-adapt", cfg.no_adapt, "Do not adapt the models while scoring");
    cmd->add_option("--theta-slr", cfg.theta_slr, "SLR threshold")->capture_default_str();
    cmd->add_option("--theta-cr", cfg.theta_cr, "CR threshold")->capture_default_str();
    cmd->add_option("--jobs", cfg.jobs, "Worker threads")->capture_default_str();
    cmd->add_option("--format", cfg.format, "Input format")
        ->check(CLI::IsMember({"tsv", "aligned"}))
        ->capture_default_str();
    cmd->add_option("inputs", cfg.inputs, "TSV file, or Arabic and English files")
        ->required();
    cmd->add_option("--out", cfg.out, "Output file (default: stdout)");
  };

  auto* train = app.add_subcommand("train", "Prime a PPM model and write it to a file");
  train->add_option("inputs", cfg.inputs, "Training documents");
  train->add_option("--out", cfg.out, "Model file to write")->required();
  train->add_option("--order", cfg.order, "Maximum context order")->capture_default_str();
  train->add_option("--alphabet", cfg.alphabet, "byte, unicode or a size")
      ->capture_default_str();
  train->add_option("--transform", cfg.text_transform, "Text transform")
      ->check(CLI::IsMember({"identity", "arabic-numeric"}))
      ->capture_default_str();
  train->add_flag("--per-line", cfg.per_line, "Reset the history at every line");

  auto* score = app.add_subcommand("score", "Score every pair");
  model_flags(score);
  score->add_option("--invalid", cfg.invalid_out, "Invalid pairs (default: stderr)");
  score->add_option("--scatter", cfg.scatter_out, "Write len/bits scatter data here");

  auto* evaluate = app.add_subcommand("evaluate", "Accuracy against ground-truth labels");
  model_flags(evaluate);
  evaluate->add_option("--metric", cfg.metric, "slr, cr or both")
      ->check(CLI::IsMember({"slr", "cr", "both"}))
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Average accuracy over a threshold grid");
  model_flags(sweep);
  sweep->add_option("--grid", cfg.grid, "start:stop:step or a comma list")
      ->capture_default_str();

  auto* filter = app.add_subcommand("filter", "Split a corpus into accepted and rejected");
  model_flags(filter);
  filter->add_option("--out-dir", cfg.out_dir, "Directory for the outputs")->required();

  auto* stats = app.add_subcommand("stats", "Share of pairs whose Arabic side is greater");
  model_flags(stats);

  auto* compress = app.add_subcommand("compress", "Encode a file under a model");
  auto* decompress = app.add_subcommand("decompress", "Decode a PPMC blob");
  for (auto* cmd : {compress, decompress}) {
    cmd->add_option("--model", cfg.model_a, "Model file")->required();
    cmd->add_option("--transform", cfg.text_transform, "Text transform")
        ->check(CLI::IsMember({"identity", "arabic-numeric"}))
        ->capture_default_str();
    cmd->add_flag("--no-adapt", cfg.no_adapt, "Use the frozen model");
    cmd->add_option("files", cfg.inputs, "IN OUT")->expected(2)->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) return CmdTrain(cfg);
    if (*score) return CmdScore(cfg);
    if (*evaluate) return CmdEvaluate(cfg);
    if (*sweep) return CmdSweep(cfg);
    if (*filter) return CmdFilter(cfg);
    if (*stats) return CmdStats(cfg);
    if (*compress) return CmdCompress(cfg);
    if (*decompress) return CmdDecompress(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
