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

// Acceptance gate. Prints one PASS/FAIL line per criterion; with an
// argument, runs only the named criterion. Exit status is nonzero when any
// selected criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "parverify.hpp"
#include "reference_samples.hpp"
#include "synthetic.hpp"

namespace {

using namespace parverify;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::vector<Symbol> CodePoints(std::string_view utf8) {
  const std::u32string cps = DecodeUtf8(utf8);
  return {cps.begin(), cps.end()};
}

std::vector<Symbol> Bytes(std::string_view s) {
  std::vector<Symbol> out;
  for (unsigned char c : s) out.push_back(c);
  return out;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

std::string Join(const std::vector<std::string>& lines, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) out += lines[i] + "\n";
  return out;
}

std::string Fixed(double v, int decimals = 4) { return FormatFixed(v, decimals); }

// Every (prediction, c, p) and escape row of the order-3 sample model, with
// exact rational equality.
Outcome SampleModel() {
  const auto start = Clock::now();
  PpmModel m(reference::kSampleOrder, kUnicodeAlphabet);
  m.Train(CodePoints(reference::kSampleString));
  int rows = 0, bad = 0, tuples = 0, bad_tuples = 0;
  std::string first_bad;
  auto check = [&](bool ok, const std::string& what) {
    ++rows;
    if (!ok) {
      ++bad;
      if (first_bad.empty()) first_bad = what;
    }
  };
  for (const auto& row : reference::SampleModelRows()) {
    const ContextStats* s = m.Find(CodePoints(row.context));
    const std::string ctx = "[" + std::string(row.context) + "]";
    if (s == nullptr) {
      check(false, ctx + " missing");
      continue;
    }
    for (const auto& p : row.predictions) {
      const Symbol sym = CodePoints(p.symbol).front();
      const std::uint64_t c = s->count(sym);
      check(c == p.c && c > 0 &&
                SymbolProbability(c, s->total()) == Rational(p.p_num, p.p_den),
            ctx + "->" + std::string(p.symbol));
      // Formula agreement on the printed (c, T) -> p tuple.
      ++tuples;
      bad_tuples += SymbolProbability(p.c, row.total) != Rational(p.p_num, p.p_den);
    }
    check(s->distinct() == row.t && s->total() == row.total &&
              EscapeProbability(s->distinct(), s->total()) == Rational(row.esc_num, row.esc_den),
          ctx + " esc");
    ++tuples;
    bad_tuples += EscapeProbability(row.t, row.total) != Rational(row.esc_num, row.esc_den);
  }
  // Order -1 row: 1/|A|.
  const ProbabilityTrace t = m.Estimate(CodePoints("سبي"), U'z');
  check(!t.steps.empty() && t.steps.back().order == -1 &&
            t.steps.back().probability == Rational(1, kUnicodeAlphabet),
        "order -1");
  const double secs = Seconds(start);
  std::ostringstream d;
  d << rows << " rows, " << bad << " mismatched" << (first_bad.empty() ? "" : " (first " + first_bad + ")")
    << "; formula tuples " << tuples - bad_tuples << "/" << tuples << "; " << Fixed(secs, 3)
    << " s (limit 1 s)";
  return {bad == 0 && bad_tuples == 0 && secs < 1.0, d.str()};
}

Outcome FormulaSpotChecks() {
  const bool a = SymbolProbability(2, 2) == Rational(3, 4);
  const bool b = EscapeProbability(1, 2) == Rational(1, 4);
  const bool c = EscapeProbability(5, 15) == Rational(5, 30) &&
                 EscapeProbability(5, 15) == Rational(1, 6);  // 1/3 * 1/2
  return {a && b && c, "p(2,2)=" + SymbolProbability(2, 2).ToString() +
                           " esc(1,2)=" + EscapeProbability(1, 2).ToString() +
                           " esc(5,15)=" + EscapeProbability(5, 15).ToString()};
}

std::string ReadData(const char* name) {
  return ReadFileText(fs::path(PARVERIFY_DATA_DIR) / name);
}

// Mixed Arabic/ASCII text of at most `bytes` UTF-8 bytes.
std::string FuzzText(std::mt19937_64& rng, std::size_t bytes) {
  static const char32_t kOther[] = {0x20AC, 0x00E9, 0x1F600, 0x7F, 0x0660, 0x06F1, 0x200F, 0x4E2D};
  std::string out;
  while (true) {
    char32_t cp;
    const auto r = rng() % 100;
    if (r < 50) {
      cp = static_cast<char32_t>(0x0621 + rng() % (0x064B - 0x0621));
    } else if (r < 65) {
      cp = U' ';
    } else if (r < 95) {
      cp = static_cast<char32_t>(0x21 + rng() % 0x5E);
    } else {
      cp = kOther[rng() % std::size(kOther)];
    }
    std::string enc;
    AppendUtf8(enc, cp);
    if (out.size() + enc.size() > bytes) break;
    out += enc;
  }
  return out;
}

Outcome CoderHonesty() {
  const auto start = Clock::now();
  PpmModel primed(kDefaultOrder, kByteAlphabet);
  TrainDocument(primed, ReadData("arabic.txt"), Transform::kArabicNumeric);
  const ModelSnapshot snap(std::move(primed));
  std::mt19937_64 rng(20240601);
  constexpr int kCases = 1000;
  constexpr std::size_t kMaxBytes = 64 * 1024;
  int failures = 0;
  double worst_low = 1e300, worst_high = -1e300;
  std::size_t total_bytes = 0;
  for (int i = 0; i < kCases; ++i) {
    std::size_t bytes;
    if (i < 5) {
      bytes = i == 0 ? 0 : kMaxBytes;
    } else {
      bytes = static_cast<std::size_t>(std::exp(std::uniform_real_distribution<double>(
                                           0.0, std::log(double(kMaxBytes) + 1.0))(rng))) - 1;
    }
    const std::string text = FuzzText(rng, bytes);
    total_bytes += text.size();
    const bool adapt = i % 4 != 3;
    const PreparedText prepared = Prepare(text, Transform::kArabicNumeric);
    const EncodedBlob blob = ParseBlob(SerializeBlob(Encode(snap, prepared.symbols, adapt)));
    const std::vector<Symbol> back = Decode(snap, blob, adapt);
    const double gap =
        static_cast<double>(blob.payload_bits()) - IdealBits(snap, prepared.symbols, adapt);
    worst_low = std::min(worst_low, gap);
    worst_high = std::max(worst_high, gap);
    if (back != prepared.symbols || Restore(back, Transform::kArabicNumeric) != text ||
        gap < 0.0 || gap > 64.0) {
      ++failures;
    }
  }
  const double secs = Seconds(start);
  std::ostringstream d;
  d << kCases << " cases, " << total_bytes << " bytes, " << failures
    << " failures; payload-ideal in [" << Fixed(worst_low) << ", " << Fixed(worst_high)
    << "] bits (allowed [0, 64]); " << Fixed(secs, 1) << " s (limit 120 s)";
  return {failures == 0 && secs < 120.0, d.str()};
}

Outcome MicroOracles() {
  const ModelSnapshot empty(PpmModel(kDefaultOrder, kByteAlphabet));
  const double aa = IdealBits(empty, Bytes("aa"), true);
  const double ab = IdealBits(empty, Bytes("ab"), true);
  const bool ok_aa = std::abs(aa - 9.0) <= 1e-9;
  const bool ok_ab = std::abs(ab - 18.0) <= 1e-9;
  return {ok_aa && ok_ab, "aa=" + Fixed(aa, 9) + " (want 9.0) ab=" + Fixed(ab, 9) +
                              " (want 18.0), tolerance 1e-9"};
}

Outcome MetricIdentities() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> log_bits(-3.0, 6.0);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = std::pow(10.0, log_bits(rng)), e = std::pow(10.0, log_bits(rng));
    const std::size_t la = 1 + rng() % 100000, le = 1 + rng() % 100000;
    const double recip = std::abs(CodeRatio(a, e) * CodeRatio(e, a) - 1.0);
    worst = std::max(worst, recip);
    if (!(Cr(a, e) >= 1.0) || !(Slr(la, le) >= 1.0) || Cr(a, e) != Cr(e, a) ||
        Slr(la, le) != Slr(le, la) || !(recip < 1e-12)) {
      ++bad;
    }
  }
  std::ostringstream d;
  d << "10000 tuples, " << bad << " violations; max |R(a,b)R(b,a)-1| = " << worst;
  return {bad == 0, d.str()};
}

ModelSnapshot BundledSnapshot(const char* file, Transform transform) {
  PpmModel m(kDefaultOrder, kByteAlphabet);
  TrainDocument(m, ReadData(file), transform);
  return ModelSnapshot(std::move(m));
}

Outcome SampleLengths() {
  const auto& samples = reference::SamplePairs();
  int exact = 0;
  std::string mismatches;
  std::vector<SentencePair> pairs;
  for (const auto& s : samples) {
    const std::size_t la = CharLength(s.arabic), le = CharLength(s.english);
    const bool ok = la == s.len_a && le == s.len_e;
    exact += ok;
    if (!ok) {
      mismatches += " " + std::to_string(s.id) + ":" + std::to_string(la) + "/" +
                    std::to_string(le) + "!=" + std::to_string(s.len_a) + "/" +
                    std::to_string(s.len_e);
    }
    pairs.push_back({std::to_string(s.id), std::string(s.arabic), std::string(s.english), {}, {}});
  }
  // Determinism: SLR values and verdicts from a fixed priming
  // corpus are identical across runs, orderings and thread counts.
  const ModelSnapshot a = BundledSnapshot("arabic.txt", Transform::kArabicNumeric);
  const ModelSnapshot e = BundledSnapshot("english.txt", Transform::kIdentity);
  const auto first = ScoreCorpus(pairs, a, e, {}, {}, 1);
  std::vector<SentencePair> reversed(pairs.rbegin(), pairs.rend());
  const auto second = ScoreCorpus(reversed, a, e, {}, {}, 4);
  bool stable = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairScore& x = *first[i].score;
    const PairScore& y = *second[pairs.size() - 1 - i].score;
    stable = stable && x.slr == y.slr && x.cr == y.cr && x.verdict == y.verdict &&
             FormatScoreRow(x) == FormatScoreRow(y);
  }
  std::ostringstream d;
  d << exact << "/" << samples.size() << " pairs with exact lengths";
  if (!mismatches.empty()) d << " (computed!=reference:" << mismatches << ")";
  d << "; determinism property " << (stable ? "holds" : "VIOLATED");
  return {exact == static_cast<int>(samples.size()) && stable, d.str()};
}

struct SyntheticSetup {
  ModelSnapshot a;
  ModelSnapshot e;
  std::vector<SentencePair> pairs;
};

SyntheticSetup MakeSynthetic(std::size_t sat, std::size_t unsat, std::uint64_t seed) {
  const auto lex = synthetic::MakeLexicon(seed);
  return {ModelSnapshot(synthetic::PrimedModel(lex, true, seed + 1)),
          ModelSnapshot(synthetic::PrimedModel(lex, false, seed + 2)),
          synthetic::LabeledPairs(lex, sat, unsat, seed + 3)};
}

std::set<std::string> AcceptedIds(const std::vector<SentencePair>& pairs,
                                  const std::vector<ScoreOutcome>& scores, const ThresholdConfig& t,
                                  MetricMode mode) {
  std::set<std::string> ids;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairScore& s = *scores[i].score;
    if (Classify(s.slr, s.cr, t, mode) == Verdict::kSatisfactory) ids.insert(pairs[i].id);
  }
  return ids;
}

const std::vector<double>& Grid() {
  static const std::vector<double> grid = {1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5};
  return grid;
}

Outcome FilterLaws() {
  const SyntheticSetup s = MakeSynthetic(400, 120, 77);
  const auto scores = ScoreCorpus(s.pairs, s.a, s.e, {}, {}, DefaultJobs());
  int union_bad = 0, mono_bad = 0;
  for (double theta : Grid()) {
    const ThresholdConfig t{theta, theta};
    const auto both = AcceptedIds(s.pairs, scores, t, MetricMode::kBoth);
    const auto by_slr = AcceptedIds(s.pairs, scores, t, MetricMode::kSlr);
    const auto by_cr = AcceptedIds(s.pairs, scores, t, MetricMode::kCr);
    // rejected(both) = rejected(slr) U rejected(cr)  <=>  accepted(both) = slr n cr
    std::set<std::string> inter;
    std::set_intersection(by_slr.begin(), by_slr.end(), by_cr.begin(), by_cr.end(),
                          std::inserter(inter, inter.begin()));
    union_bad += inter != both;
  }
  for (std::size_t i = 0; i < Grid().size(); ++i) {
    for (std::size_t j = 0; j + 1 < Grid().size(); ++j) {
      const double x = Grid()[i], lo = Grid()[j], hi = Grid()[j + 1];
      auto subset = [&](const ThresholdConfig& small, const ThresholdConfig& big) {
        const auto a = AcceptedIds(s.pairs, scores, small, MetricMode::kBoth);
        const auto b = AcceptedIds(s.pairs, scores, big, MetricMode::kBoth);
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
      };
      mono_bad += !subset({lo, x}, {hi, x});
      mono_bad += !subset({x, lo}, {x, hi});
    }
  }
  const double avg = UnweightedAverage(20.29, 100.0);
  const bool avg_ok = std::abs(avg - 60.145) < 1e-12 && Fixed(std::round(avg * 100) / 100, 2) == "60.15";
  std::ostringstream d;
  d << "union law violations " << union_bad << "/10; monotonicity violations " << mono_bad
    << "/180; (20.29, 100) -> " << Fixed(avg, 3);
  return {union_bad == 0 && mono_bad == 0 && avg_ok, d.str()};
}

Outcome SyntheticSweep() {
  const auto start = Clock::now();
  const SyntheticSetup s = MakeSynthetic(600, 150, 1234);
  const auto scores = ScoreCorpus(s.pairs, s.a, s.e, {}, {}, DefaultJobs());
  const ThresholdMatrix m = ComputeThresholdMatrix(s.pairs, scores, Grid(), Grid());
  double best_both = -1, best_slr = -1, best_cr = -1;
  std::string at;
  for (std::size_t i = 0; i < Grid().size(); ++i) {
    for (std::size_t j = 0; j < Grid().size(); ++j) {
      if (m.average[i][j] > best_both) {
        best_both = m.average[i][j];
        at = "SLR " + Fixed(Grid()[j], 2) + " CR " + Fixed(Grid()[i], 2);
      }
    }
    const ThresholdConfig t{Grid()[i], Grid()[i]};
    best_slr = std::max(best_slr, Evaluate(s.pairs, scores, t, MetricMode::kSlr).average);
    best_cr = std::max(best_cr, Evaluate(s.pairs, scores, t, MetricMode::kCr).average);
  }
  const double secs = Seconds(start);
  std::ostringstream d;
  d << "600 sat / 150 unsat; best SLR&CR " << Fixed(best_both, 2) << "% at " << at
    << "; best SLR " << Fixed(best_slr, 2) << "%; best CR " << Fixed(best_cr, 2) << "%; "
    << Fixed(secs, 1) << " s (limit 60 s)";
  return {best_both >= best_slr && best_both >= best_cr && secs < 60.0, d.str()};
}

// Bits per character of held-out lines, each scored as its own text.
double HeldOutBpc(const ModelSnapshot& model, const std::vector<std::string>& lines,
                  std::size_t begin, Transform transform) {
  double bits = 0.0;
  std::size_t chars = 0;
  for (std::size_t i = begin; i < lines.size(); ++i) {
    const PreparedText p = Prepare(lines[i], transform);
    bits += IdealBits(model, p.symbols, true);
    chars += p.char_length;
  }
  return bits / static_cast<double>(chars);
}

Outcome PrimingEffect() {
  std::ostringstream d;
  bool pass = true;
  for (const auto& [file, transform] : {std::pair{"arabic.txt", Transform::kArabicNumeric},
                                        std::pair{"english.txt", Transform::kIdentity}}) {
    const auto lines = Lines(ReadData(file));
    const std::size_t split = lines.size() * 9 / 10;
    PpmModel m(kDefaultOrder, kByteAlphabet);
    TrainDocument(m, Join(lines, 0, split), transform);
    const double primed = HeldOutBpc(ModelSnapshot(std::move(m)), lines, split, transform);
    const double unprimed =
        HeldOutBpc(ModelSnapshot(PpmModel(kDefaultOrder, kByteAlphabet)), lines, split, transform);
    const double reduction = 100.0 * (1.0 - primed / unprimed);
    pass = pass && reduction >= 20.0;
    d << file << " " << lines.size() - split << " held-out lines: " << Fixed(unprimed, 3)
      << " -> " << Fixed(primed, 3) << " bpc (-" << Fixed(reduction, 1) << "%, need 20%); ";
  }
  return {pass, d.str()};
}

int RunCli(const std::string& args) {
  const std::string cmd = std::string("'") + PARVERIFY_CLI_PATH + "' " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome FilterDeterminism() {
  const fs::path dir = fs::temp_directory_path() / "parverify_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto lex = synthetic::MakeLexicon(555);
  SaveModel(synthetic::PrimedModel(lex, true, 556), dir / "a.ppm");
  SaveModel(synthetic::PrimedModel(lex, false, 557), dir / "e.ppm");
  auto pairs = synthetic::LabeledPairs(lex, 9000, 1000, 558);
  pairs[17].text_e.clear();  // one invalid pair exercises that output too
  WriteFileText(dir / "pairs.tsv", FormatCorpusTsv(pairs));
  const unsigned many = std::max(4u, std::thread::hardware_concurrency());
  const std::string common = "filter --model-a '" + (dir / "a.ppm").string() + "' --model-e '" +
                             (dir / "e.ppm").string() + "' '" + (dir / "pairs.tsv").string() + "'";
  const int rc1 = RunCli(common + " --jobs 1 --out-dir '" + (dir / "j1").string() + "'");
  const int rcn = RunCli(common + " --jobs " + std::to_string(many) + " --out-dir '" +
                         (dir / "jn").string() + "'");
  int identical = 0;
  std::size_t bytes = 0;
  for (const char* name : {"accepted.tsv", "rejected.tsv", "invalid.tsv", "report.json"}) {
    try {
      const std::string x = ReadFileText(dir / "j1" / name);
      identical += x == ReadFileText(dir / "jn" / name);
      bytes += x.size();
    } catch (const Error&) {
    }
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << pairs.size() << " pairs; exit codes " << rc1 << "/" << rcn << "; " << identical
    << "/4 output files byte-identical (" << bytes << " bytes) at --jobs 1 vs --jobs " << many;
  return {rc1 == 0 && rcn == 0 && identical == 4, d.str()};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"sample-model", SampleModel},
      {"formula-spot-checks", FormulaSpotChecks},
      {"coder-honesty", CoderHonesty},
      {"micro-oracles", MicroOracles},
      {"metric-identities", MetricIdentities},
      {"sample-lengths", SampleLengths},
      {"filter-laws", FilterLaws},
      {"synthetic-sweep", SyntheticSweep},
      {"priming-effect", PrimingEffect},
      {"filter-determinism", FilterDeterminism},
  };
  const std::string only = argc > 1 ? argv[1] : "";
  int failed = 0, ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& c = criteria[i];
    if (!only.empty() && only != c.name) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %-20s %s\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
