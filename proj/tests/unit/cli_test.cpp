// Copyright 2026 The prior-adapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "formats.hpp"

namespace {

namespace fs = std::filesystem;
using prior_adapt::cli::run;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string fixture(const std::string& name) { return std::string(PRIOR_ADAPT_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("prior_adapt_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                          "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

TEST(Normalize, RawCounts) {
  const auto o = invoke({"normalize", "--input", fixture("counts.csv")});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "a,b\n0.8,0.2\n0.4,0.6\n");
}

TEST(Normalize, Idempotent) {
  const auto o = invoke({"normalize", fixture("normalized.csv")});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, slurp(fixture("normalized.csv")));
}

TEST(Normalize, Errors) {
  auto o = invoke({"normalize", "--input", fixture("zero_row.csv")});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("'b'"), std::string::npos);
  EXPECT_EQ(invoke({"normalize", "--input", fixture("not_square.csv")}).code, 2);
  EXPECT_EQ(invoke({"normalize", "--input", fixture("negative.csv")}).code, 2);
  EXPECT_EQ(invoke({"normalize", "--input", fixture("missing.csv")}).code, 4);
}

TEST(Normalize, RoundTripWithinTolerance) {
  TempDir dir;
  std::ofstream(dir.file("raw.csv")) << "x,y,z\n3,1,7\n1,1,1\n0.1,0.2,0.7000000000000001\n";
  ASSERT_EQ(invoke({"--output", dir.file("n.csv"), "normalize", "--input", dir.file("raw.csv")}).code, 0);
  std::ifstream in(dir.file("n.csv"));
  const auto conf = prior_adapt::io::read_confusion_csv(in);
  Eigen::MatrixXd expected(3, 3);
  expected << 3, 1, 7, 1, 1, 1, 0.1, 0.2, 0.7000000000000001;
  for (Eigen::Index j = 0; j < 3; ++j) expected.row(j) /= expected.row(j).sum();
  EXPECT_LT((conf.rows() - expected).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(Estimate, IdentityNaive) {
  const auto o = invoke({"estimate", "--confusion", fixture("identity3.csv"), "--decisions",
                         fixture("identity_decisions.txt"), "--method", "naive"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_EQ(doc["observations"], 4);
  EXPECT_EQ(doc["priors"]["naive"]["c0"], 0.5);
  EXPECT_EQ(doc["priors"]["naive"]["c1"], 0.25);
  EXPECT_EQ(doc["priors"]["naive"]["c2"], 0.25);
  EXPECT_FALSE(doc["priors"].contains("quadratic_program"));
}

TEST(Estimate, ConsistentFixtureQp) {
  const auto o = invoke({"estimate", "--confusion", fixture("sym3.csv"), "--decisions", fixture("sym3_decisions.txt"),
                         "--method", "qp"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  const auto& qp = doc["priors"]["quadratic_program"];
  EXPECT_NEAR(qp["cat"].get<double>(), 0.7, 1e-6);
  EXPECT_NEAR(qp["dog"].get<double>(), 0.2, 1e-6);
  EXPECT_NEAR(qp["fox"].get<double>(), 0.1, 1e-6);
  EXPECT_EQ(doc["histogram"]["dog"], 24);
}

TEST(Estimate, ScoresFileAndWindowAndTrajectory) {
  const auto o = invoke({"estimate", "--confusion", fixture("sym3.csv"), "--decisions", fixture("scores.csv"),
                         "--window", "3", "--reestimate-every", "2", "--method", "naive"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_EQ(doc["observations"], 5);
  // Last three baseline decisions: cat (tie), fox, cat.
  EXPECT_EQ(doc["histogram"]["cat"], 2);
  EXPECT_EQ(doc["histogram"]["fox"], 1);
  ASSERT_EQ(doc["trajectory"].size(), 2u);
  EXPECT_EQ(doc["trajectory"][0]["decisions"], 2);
}

TEST(Estimate, ParseErrorNamesLine) {
  const auto o = invoke({"estimate", "--confusion", fixture("sym3.csv"), "--decisions", fixture("scores_bad.csv")});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("line 3"), std::string::npos) << o.err;
}

TEST(Estimate, DimensionMismatch) {
  const auto o = invoke({"estimate", "--confusion", fixture("normalized.csv"), "--decisions", fixture("scores.csv")});
  EXPECT_EQ(o.code, 2);
  EXPECT_EQ(invoke({"estimate", "--confusion", fixture("identity3.csv"), "--decisions", fixture("sym3_decisions.txt")}).code,
            2);
}

TEST(Estimate, UnknownMethod) {
  EXPECT_EQ(invoke({"estimate", "--confusion", fixture("identity3.csv"), "--decisions",
                    fixture("identity_decisions.txt"), "--method", "em"})
                .code,
            2);
}

TEST(Estimate, UnnormalizedConfusionRejected) {
  EXPECT_EQ(invoke({"estimate", "--confusion", fixture("counts.csv"), "--decisions", fixture("identity_decisions.txt")})
                .code,
            2);
}

TEST(Estimate, NonConvergenceReportsBestIterate) {
  const auto o = invoke({"estimate", "--confusion", fixture("sym3.csv"), "--decisions", fixture("sym3_decisions.txt"),
                         "--method", "qp", "--max-iterations", "1"});
  EXPECT_EQ(o.code, 3);
  const auto doc = nlohmann::json::parse(o.out);
  EXPECT_EQ(doc["errors"]["quadratic_program"]["code"], "convergence");
  EXPECT_TRUE(doc["errors"]["quadratic_program"].contains("best_iterate"));
}

TEST(Estimate, SolverFailureExitCode) {
  TempDir dir;
  std::ofstream(dir.file("sing.csv")) << "a,b\n0.5,0.5\n0.5,0.5\n";
  const auto o = invoke({"estimate", "--confusion", dir.file("sing.csv"), "--decisions", fixture("identity_decisions.txt"),
                         "--method", "inverse"});
  // Decision 2 is out of range for two classes.
  EXPECT_EQ(o.code, 2);
  std::ofstream(dir.file("d.txt")) << "0\n1\n1\n";
  EXPECT_EQ(invoke({"estimate", "--confusion", dir.file("sing.csv"), "--decisions", dir.file("d.txt"), "--method",
                    "inverse"})
                .code,
            3);
}

TEST(Reweight, WorkedExample) {
  const auto o = invoke({"reweight", "--scores", fixture("scores.csv"), "--priors", fixture("priors.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream lines(o.out);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "row,baseline,adapted,fallback,raw_cat,raw_dog,raw_fox,norm_cat,norm_dog,norm_fox");
  EXPECT_EQ(first.substr(0, 12), "0,cat,dog,0,");
}

TEST(Reweight, UniformPriorsKeepBaseline) {
  const auto o = invoke({"reweight", "--scores", fixture("scores.csv"), "--priors", fixture("uniform_priors.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream lines(o.out);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto fields = prior_adapt::io::split_csv_line(line);
    EXPECT_EQ(fields[1], fields[2]) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(Reweight, FallbackFlag) {
  const auto o = invoke({"reweight", "--scores", fixture("scores.csv"), "--priors", fixture("priors.json"), "--method",
                         "naive"});
  ASSERT_EQ(o.code, 0) << o.err;
  // Last row scores (1,0,0) against priors (0,1,0): every product is zero.
  EXPECT_NE(o.out.find("\n4,cat,cat,1,"), std::string::npos) << o.out;
}

TEST(Reweight, EmptyFile) {
  TempDir dir;
  std::ofstream(dir.file("empty.csv")).close();
  const auto o = invoke({"reweight", "--scores", dir.file("empty.csv"), "--priors", fixture("priors.json")});
  EXPECT_EQ(o.code, 0);
  EXPECT_EQ(o.out, "");
}

TEST(Reweight, StrictAndLenient) {
  auto o = invoke({"reweight", "--scores", fixture("scores_bad.csv"), "--priors", fixture("priors.json")});
  EXPECT_EQ(o.code, 2);
  o = invoke({"reweight", "--lenient", "--scores", fixture("scores_bad.csv"), "--priors", fixture("priors.json")});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.err.find("line 3"), std::string::npos);
  EXPECT_EQ(std::count(o.out.begin(), o.out.end(), '\n'), 3);
  o = invoke({"--quiet", "reweight", "--lenient", "--scores", fixture("scores_bad.csv"), "--priors",
              fixture("priors.json")});
  EXPECT_EQ(o.err, "");
}

TEST(Reweight, PriorsMustCoverCatalog) {
  TempDir dir;
  std::ofstream(dir.file("p.json")) << R"({"cat": 0.5, "dog": 0.5})";
  EXPECT_EQ(invoke({"reweight", "--scores", fixture("scores.csv"), "--priors", dir.file("p.json")}).code, 2);
}

TEST(Reweight, Logits) {
  TempDir dir;
  std::ofstream(dir.file("l.csv")) << "s_a,s_b\n2.0,-1.0\n0,0\n";
  std::ofstream(dir.file("p.json")) << R"({"a": 0.01, "b": 0.99})";
  const auto o = invoke({"reweight", "--logits", "--scores", dir.file("l.csv"), "--priors", dir.file("p.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("\n0,a,b,0,"), std::string::npos);
  EXPECT_NE(o.out.find("\n1,a,b,0,"), std::string::npos);
}

TEST(Simulate, DeterministicWithDriftBookkeeping) {
  TempDir dir;
  const std::vector<std::string> a{"simulate", "--scenario", fixture("scenario.json"), "--scores", dir.file("s1.csv"),
                                   "--truth", dir.file("t1.csv")};
  const std::vector<std::string> b{"simulate", "--scenario", fixture("scenario.json"), "--scores", dir.file("s2.csv"),
                                   "--truth", dir.file("t2.csv")};
  ASSERT_EQ(invoke(a).code, 0);
  ASSERT_EQ(invoke(b).code, 0);
  EXPECT_EQ(slurp(dir.file("s1.csv")), slurp(dir.file("s2.csv")));
  EXPECT_EQ(slurp(dir.file("t1.csv")), slurp(dir.file("t2.csv")));

  std::ifstream truth(dir.file("t1.csv"));
  std::string line;
  std::getline(truth, line);
  EXPECT_EQ(line, "index,label,segment,prior_cat,prior_dog,prior_fox,prior_owl");
  std::size_t rows = 0, first_in_segment_1 = 0;
  while (std::getline(truth, line)) {
    const auto f = prior_adapt::io::split_csv_line(line);
    if (f[2] == "1" && first_in_segment_1 == 0) first_in_segment_1 = std::stoul(f[0]);
    ++rows;
  }
  EXPECT_EQ(rows, 100u);
  EXPECT_EQ(first_in_segment_1, 50u);

  const auto other = invoke({"--seed", "8", "simulate", "--scenario", fixture("scenario.json"), "--scores",
                             dir.file("s3.csv"), "--truth", dir.file("t3.csv")});
  ASSERT_EQ(other.code, 0);
  EXPECT_NE(slurp(dir.file("s1.csv")), slurp(dir.file("s3.csv")));
}

TEST(Simulate, PointMassLabels) {
  TempDir dir;
  ASSERT_EQ(invoke({"simulate", "--scenario", fixture("point_mass.json"), "--scores", dir.file("s.csv"), "--truth",
                    dir.file("t.csv")})
                .code,
            0);
  std::ifstream truth(dir.file("t.csv"));
  std::string line;
  std::getline(truth, line);
  while (std::getline(truth, line)) EXPECT_EQ(prior_adapt::io::split_csv_line(line)[1], "a");
}

TEST(Simulate, ValidationNamesFieldPath) {
  TempDir dir;
  std::ofstream(dir.file("bad.json")) << R"({"num_classes": 3, "active_classes": [0, 1], "true_priors": [0.5, 0.6],
                                           "transfer_size": 5, "test_size": 5})";
  const auto o = invoke({"simulate", "--scenario", dir.file("bad.json"), "--scores", dir.file("s.csv"), "--truth",
                         dir.file("t.csv")});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("true_priors"), std::string::npos) << o.err;
  std::ofstream(dir.file("bad2.json")) << R"({"num_classes": 3, "active_classes": ["zz"], "transfer_size": 5,
                                            "test_size": 5})";
  const auto o2 = invoke({"simulate", "--scenario", dir.file("bad2.json"), "--scores", dir.file("s.csv"), "--truth",
                          dir.file("t.csv")});
  EXPECT_EQ(o2.code, 2);
  EXPECT_NE(o2.err.find("active_classes[0]"), std::string::npos) << o2.err;
}

TEST(Evaluate, IdentitySuiteIsPerfect) {
  const auto o = invoke({"--format", "json", "evaluate", "--scenario", fixture("suite_identity.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto doc = nlohmann::json::parse(o.out);
  for (const auto& scenario : doc["scenarios"]) {
    for (const char* m : {"uniform", "naive", "quadratic_program", "ground_truth"}) {
      EXPECT_EQ(scenario["methods"][m]["mean_accuracy"], 1.0) << scenario["name"] << " " << m;
    }
  }
}

TEST(Evaluate, MarkdownShapeAndBolding) {
  const auto o = invoke({"evaluate", "--scenario", fixture("suite_small.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.rfind("| Method | left | right |\n", 0), 0u) << o.out;
  for (const char* row : {"| Baseline |", "| Naive |", "| Matrix inverse |", "| Quadratic programming |",
                          "| Ground truth |"}) {
    EXPECT_NE(o.out.find(row), std::string::npos) << row;
  }
  const auto gt_line = o.out.substr(o.out.find("| Ground truth |"));
  EXPECT_EQ(gt_line.substr(0, gt_line.find('\n')).find("**"), std::string::npos);
  EXPECT_GE(std::count(o.out.begin(), o.out.end(), '*'), 8);
}

TEST(Evaluate, DriftTableAppears) {
  const auto o = invoke({"evaluate", "--scenario", fixture("scenario.json"), "--folds", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("Drift"), std::string::npos);
  EXPECT_NE(o.out.find("| shift | 1 | 50 | 50 |"), std::string::npos) << o.out;
}

TEST(Evaluate, CsvFormat) {
  const auto o = invoke({"--format", "csv", "evaluate", "--scenario", fixture("suite_small.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.rfind("scenario,method,mean_accuracy,std_accuracy,prior_l1_error,failed_folds\n", 0), 0u);
  EXPECT_NE(o.out.find("\nright,quadratic_program,"), std::string::npos);
}

TEST(Evaluate, FoldsMustBeAtLeastTwo) {
  const auto o = invoke({"evaluate", "--suite", "default", "--folds", "1"});
  EXPECT_EQ(o.code, 2);
}

TEST(Evaluate, Deterministic) {
  const auto a = invoke({"--seed", "3", "evaluate", "--scenario", fixture("suite_small.json")});
  const auto b = invoke({"--seed", "3", "evaluate", "--scenario", fixture("suite_small.json")});
  EXPECT_EQ(a.out, b.out);
  const auto c = invoke({"--seed", "4", "evaluate", "--scenario", fixture("suite_small.json")});
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"estimate", "--confusion", fixture("sym3.csv")}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, OutputFileUnwritable) {
  EXPECT_EQ(invoke({"--output", "/nonexistent/dir/out.csv", "normalize", "--input", fixture("counts.csv")}).code, 4);
}

}  // namespace
