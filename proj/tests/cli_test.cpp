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

// End-to-end tests of the parverify binary.

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>


namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("parverify_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  Result Run(const std::string& args) const {
    const std::string cmd = std::string("'") + PARVERIFY_CLI_PATH + "' " + args + " >'" +
                            Path("stdout").string() + "' 2>'" + Path("stderr").string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, Slurp(Path("stdout")),
            Slurp(Path("stderr"))};
  }

  std::string Q(const std::string& name) const { return "'" + Path(name).string() + "'"; }

  fs::path dir_;
};

const char* kPairs =
    "id\ttext_a\ttext_e\tlabel\tcategory\n"
    "1\tسيكون هناك شيء جديد تسمعه.\tYou will have something new to listen to.\tsat\tnews\n"
    "2\tالسوق\tThe morning market opens before sunrise, when the first trucks arrive from the "
    "farms.\tunsat\tnews\n"
    "3\tالسوق يفتح قبل شروق الشمس.\tThe market opens before sunrise.\tsat\tcity\n"
    "4\tمرحبا\t\tsat\tcity\n";

TEST_F(Cli, ScorePrintsOneRowPerValidPair) {
  Spit(Path("p.tsv"), kPairs);
  const Result r = Run("score " + Q("p.tsv") + " --invalid " + Q("bad.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "id\tlen_a\tlen_e\tbits_a\tbits_e\tslr\tcr\tverdict");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 3);
  const std::string bad = Slurp(Path("bad.tsv"));
  EXPECT_EQ(bad.rfind("4\t", 0), 0u) << bad;
}

TEST_F(Cli, ScoreOfIdenticalTextsIsOne) {
  Spit(Path("p.tsv"), "1\tsame words here\tsame words here\n");
  Spit(Path("t.txt"), "some words are here and there\n");
  ASSERT_EQ(Run("train --out " + Q("m.ppm") + " " + Q("t.txt")).code, 0);
  const Result r = Run("score --transform identity --model-a " + Q("m.ppm") + " --model-e " +
                       Q("m.ppm") + " " + Q("p.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\t1.0000\t1.0000\tsatisfactory"), std::string::npos) << r.out;
}

TEST_F(Cli, ScoreIsDeterministicAcrossJobs) {
  std::string tsv;
  for (int i = 0; i < 200; ++i) {
    tsv += std::to_string(i) + "\tالسوق يفتح " + std::string(i % 7, 'x') + "\tmarket " +
           std::to_string(i * 31) + "\n";
  }
  Spit(Path("p.tsv"), tsv);
  const Result one = Run("score --jobs 1 " + Q("p.tsv"));
  const Result many = Run("score --jobs 4 " + Q("p.tsv"));
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, many.out);
}

TEST_F(Cli, ScatterExport) {
  Spit(Path("p.tsv"), kPairs);
  ASSERT_EQ(Run("score " + Q("p.tsv") + " --scatter " + Q("sc.tsv")).code, 0);
  const std::string sc = Slurp(Path("sc.tsv"));
  EXPECT_EQ(sc.rfind("len_a\tlen_e\tbits_a\tbits_e\tverdict\n", 0), 0u);
}

TEST_F(Cli, EvaluateReportsAccuracies) {
  Spit(Path("p.tsv"), kPairs);
  const Result r = Run("evaluate --metric slr " + Q("p.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("metric\tslr\n"), std::string::npos);
  EXPECT_NE(r.out.find("sat_accuracy\t100.00\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("unsat_accuracy\t100.00\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("invalid_pairs\t1\n"), std::string::npos) << r.out;
}

TEST_F(Cli, SweepPrintsTenByTenMatrix) {
  Spit(Path("p.tsv"), kPairs);
  const Result r = Run("sweep " + Q("p.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "CR\\SLR\t1.25\t1.50\t1.75\t2.00\t2.25\t2.50\t2.75\t3.00\t3.25\t3.50");
  int rows = 0;
  for (std::string line; std::getline(lines, line); ++rows) {
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 10) << line;
  }
  EXPECT_EQ(rows, 10);
}

TEST_F(Cli, SweepRejectsDecreasingGrid) {
  Spit(Path("p.tsv"), kPairs);
  EXPECT_EQ(Run("sweep --grid 2,1.5 " + Q("p.tsv")).code, 2);
  EXPECT_EQ(Run("sweep --grid 1:0.5:0.1 " + Q("p.tsv")).code, 2);
}

TEST_F(Cli, FilterWritesPartitionAndReport) {
  Spit(Path("p.tsv"), kPairs);
  const Result r = Run("filter --out-dir " + Q("out") + " " + Q("p.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string accepted = Slurp(Path("out/accepted.tsv"));
  const std::string rejected = Slurp(Path("out/rejected.tsv"));
  const std::string invalid = Slurp(Path("out/invalid.tsv"));
  EXPECT_NE(accepted.find("\tsatisfactory\tnews"), std::string::npos);
  EXPECT_EQ(rejected.rfind("2\t", 0), 0u) << rejected;
  EXPECT_EQ(invalid.rfind("4\t", 0), 0u) << invalid;
  const std::string report = Slurp(Path("out/report.json"));
  EXPECT_NE(report.find("\"accepted\": 2"), std::string::npos) << report;
  EXPECT_NE(report.find("\"invalid\": 1"), std::string::npos) << report;
}

TEST_F(Cli, StatsOnSelfPairedCorpusIsZero) {
  Spit(Path("p.tsv"), "1\tabc def\tabc def\n2\tghi\tghi\n");
  Spit(Path("t.txt"), "abc ghi\n");
  ASSERT_EQ(Run("train --out " + Q("m.ppm") + " " + Q("t.txt")).code, 0);
  const Result r = Run("stats --transform identity --model-a " + Q("m.ppm") + " --model-e " +
                       Q("m.ppm") + " " + Q("p.tsv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("average\t2\t0.00\t0.00\n"), std::string::npos) << r.out;
}

TEST_F(Cli, AlignedInput) {
  Spit(Path("a.txt"), "السوق يفتح.\nمرحبا\n");
  Spit(Path("e.txt"), "The market opens.\nHello\n");
  const Result r = Run("score --format aligned " + Q("a.txt") + " " + Q("e.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\n2\t5\t5\t"), std::string::npos) << r.out;
  Spit(Path("e.txt"), "only one line\n");
  const Result bad = Run("score --format aligned " + Q("a.txt") + " " + Q("e.txt"));
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("has 2 lines"), std::string::npos) << bad.err;
}

TEST_F(Cli, TrainIsDeterministicAndModelsAreUsable) {
  const std::string data = PARVERIFY_DATA_DIR;
  const Result r1 = Run("train --transform arabic-numeric --out " + Q("a1.ppm") + " '" + data +
                        "/arabic.txt'");
  const Result r2 = Run("train --transform arabic-numeric --out " + Q("a2.ppm") + " '" + data +
                        "/arabic.txt'");
  ASSERT_EQ(r1.code, 0) << r1.err;
  EXPECT_NE(r1.out.find("symbols\t"), std::string::npos);
  EXPECT_NE(r1.out.find("order\t5\n"), std::string::npos);
  EXPECT_EQ(Slurp(Path("a1.ppm")), Slurp(Path("a2.ppm")));
  ASSERT_EQ(Run("train --out " + Q("e.ppm") + " '" + data + "/english.txt'").code, 0);
  Spit(Path("p.tsv"), kPairs);
  const Result bundled = Run("score " + Q("p.tsv"));
  const Result files =
      Run("score --model-a " + Q("a1.ppm") + " --model-e " + Q("e.ppm") + " " + Q("p.tsv"));
  ASSERT_EQ(files.code, 0) << files.err;
  EXPECT_EQ(bundled.out, files.out);  // the bundled models are the same corpora
}

TEST_F(Cli, TrainOnEmptyFileGivesEmptyModel) {
  Spit(Path("empty.txt"), "");
  const Result r = Run("train --order 3 --out " + Q("m.ppm") + " " + Q("empty.txt"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("symbols\t0\n"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(Path("m.ppm")));
}

TEST_F(Cli, CompressDecompressRoundTrip) {
  const std::string data = PARVERIFY_DATA_DIR;
  ASSERT_EQ(Run("train --transform arabic-numeric --out " + Q("a.ppm") + " '" + data +
                "/arabic.txt'")
                .code,
            0);
  Spit(Path("in.txt"), "السوق يفتح قبل شروق الشمس، €5 فقط.\n");
  const Result c =
      Run("compress --transform arabic-numeric --model " + Q("a.ppm") + " " + Q("in.txt") + " " + Q("x.ppmc"));
  ASSERT_EQ(c.code, 0) << c.err;
  ASSERT_EQ(Run("decompress --transform arabic-numeric --model " + Q("a.ppm") + " " + Q("x.ppmc") +
                " " + Q("back.txt"))
                .code,
            0);
  EXPECT_EQ(Slurp(Path("back.txt")), Slurp(Path("in.txt")));
  // Wrong adapt flag and damaged blobs are reported as corrupt input.
  EXPECT_EQ(Run("decompress --no-adapt --transform arabic-numeric --model " + Q("a.ppm") + " " +
                Q("x.ppmc") + " " + Q("y.txt"))
                .code,
            3);
  std::string blob = Slurp(Path("x.ppmc"));
  blob.resize(blob.size() - 1);
  Spit(Path("cut.ppmc"), blob);
  EXPECT_EQ(Run("decompress --transform arabic-numeric --model " + Q("a.ppm") + " " + Q("cut.ppmc") +
                " " + Q("y.txt"))
                .code,
            3);
}

TEST_F(Cli, ExitCodesByFailureClass) {
  Spit(Path("p.tsv"), kPairs);
  Spit(Path("broken.tsv"), "1\tonly two\n");
  EXPECT_EQ(Run("score --theta-slr 0 " + Q("p.tsv")).code, 2);
  EXPECT_EQ(Run("score --metric nope " + Q("p.tsv")).code, 2);
  EXPECT_EQ(Run("frobnicate").code, 2);
  EXPECT_EQ(Run("score " + Q("broken.tsv")).code, 3);
  EXPECT_EQ(Run("score " + Q("missing.tsv")).code, 4);
  EXPECT_EQ(Run("score --model-a " + Q("missing.ppm") + " " + Q("p.tsv")).code, 4);
  EXPECT_EQ(Run("filter --out-dir /proc/parverify-no " + Q("p.tsv")).code, 4);
  EXPECT_EQ(Run("--help").code, 0);
}

}  // namespace
