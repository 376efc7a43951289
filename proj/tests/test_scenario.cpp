// Copyright 2026 The ERD Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "erd/scenario.hpp"

namespace erd {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("erd_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

TEST(Config, DefaultsAreFilledIn) {
  const auto s = parse_config(R"([{"kind": "gate-sim"}])");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].name, "gate-sim-0");
  EXPECT_EQ(s[0].output_path, "gate-sim-0.json");
  EXPECT_EQ(s[0].seed, 1u);
  EXPECT_EQ(s[0].parameters.at("axis"), "X");
  EXPECT_EQ(s[0].parameters.at("bath_dim"), 2);
}

TEST(Config, SerializeRoundTrip) {
  const auto a = parse_config(R"([
    {"name": "g", "kind": "gate-sim", "seed": 9, "parameters": {"axis": "Y", "gammas": [0.002]}},
    {"name": "s", "kind": "dt-scan", "output_path": "sub/s.json",
     "parameters": {"dt_grid": [4, 3, 2, 1]}}
  ])");
  const auto text = serialize(a);
  const auto b = parse_config(text);
  EXPECT_EQ(a, b);
  EXPECT_EQ(serialize(b), text);
}

TEST(Config, ReportsEveryIssueWithLine) {
  const std::string text =
      "[\n"
      "  {\"name\": \"a\", \"kind\": \"storage-sim\",\n"
      "   \"parameters\": {\n"
      "     \"dt\": -1,\n"
      "     \"colour\": 3}},\n"
      "  {\"name\": \"a\", \"kind\": \"block4-sim\", \"extra\": 1}\n"
      "]\n";
  try {
    parse_config(text);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const auto& is = e.issues();
    ASSERT_EQ(is.size(), 4u);
    EXPECT_EQ(is[0].line, 4u);
    EXPECT_EQ(is[0].key, "dt");
    EXPECT_EQ(is[1].line, 5u);
    EXPECT_EQ(is[1].key, "colour");
    EXPECT_EQ(is[2].line, 6u);
    EXPECT_EQ(is[3].line, 6u);
  }
}

TEST(Config, RejectsBadShapes) {
  EXPECT_THROW(parse_config("{}"), ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"nope\"}]"), ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"dt-scan\"}]"), ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"dt-scan\", \"parameters\": {\"dt_grid\": [1, 2, 3]}}]"),
               ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"gate-sim\", \"output_path\": \"../x.json\"}]"),
               ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"gate-sim\", \"output_path\": \"x.txt\"}]"), ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"gate-sim\", \"seed\": -3}]"), ConfigError);
  EXPECT_THROW(parse_config("[{\"kind\": \"block4-sim\", \"parameters\": {\"n_ions\": 4.5}}]"),
               ConfigError);
  try {
    parse_config("[\n{\"kind\": \"gate-sim\",,}]");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.issues().at(0).line, 2u);
  }
}

TEST(Config, TablePath) {
  EXPECT_EQ(config::table_path("a/b.json"), "a/b.csv");
  EXPECT_EQ(config::table_path("x.json"), "x.csv");
}

TEST(Run, WritesReportAndTable) {
  const auto dir = scratch_dir("run");
  const auto s = parse_config(R"([{"name": "g", "kind": "gate-sim", "output_path": "out/g.json"}])");
  const auto r = run(s[0], {dir, 1});
  EXPECT_TRUE(r.passed());
  ASSERT_TRUE(fs::exists(dir / "out/g.json"));
  ASSERT_TRUE(fs::exists(dir / "out/g.csv"));
  const auto doc = json::parse(slurp(dir / "out/g.json"));
  EXPECT_EQ(doc.at("partial"), false);
  EXPECT_EQ(doc.at("scenario").at("name"), "g");
  EXPECT_EQ(doc.at("checks").size(), 3u);
  EXPECT_EQ(slurp(dir / "out/g.csv").substr(0, 22), "gamma,infidelity,bound");
}

TEST(Run, FailureIsRecordedAsPartial) {
  const auto dir = scratch_dir("partial");
  // A block size that passes the config check but not the runner.
  const auto s = parse_config(R"([{"name": "b", "kind": "block4-sim", "parameters": {"n_ions": 6}}])");
  const auto r = run(s[0], {dir, 1});
  EXPECT_TRUE(r.partial);
  EXPECT_FALSE(r.passed());
  const auto doc = json::parse(slurp(dir / "b.json"));
  EXPECT_EQ(doc.at("partial"), true);
  EXPECT_NE(doc.at("error").get<std::string>().find("multiple of 4"), std::string::npos);
  std::ostringstream os;
  EXPECT_FALSE(report({r}, os));
  EXPECT_NE(os.str().find("FAILED (1 of 1 checks)"), std::string::npos);
}

TEST(Run, ArtifactsIndependentOfJobs) {
  const auto text = R"([{"name": "s", "kind": "storage-sim", "seed": 5,
      "parameters": {"dt": 1e-4, "n_traj": 12, "n_harmonics": 64, "max_horizon": 4e-3}}])";
  const auto s = parse_config(text);
  const auto a = scratch_dir("jobs1"), b = scratch_dir("jobs3");
  run(s[0], {a, 1});
  run(s[0], {b, 3});
  EXPECT_EQ(slurp(a / "s.json"), slurp(b / "s.json"));
  EXPECT_EQ(slurp(a / "s.csv"), slurp(b / "s.csv"));
}

TEST(Report, SummaryLines) {
  std::ostringstream empty;
  EXPECT_TRUE(report({}, empty));
  EXPECT_EQ(empty.str(), "warning: no scenarios\n");
  ScenarioResult ok{"x", "formulas", {check_near("c", 1.0, 1.0, 0.1)}, false, "", {}};
  std::ostringstream os;
  EXPECT_TRUE(report({ok}, os));
  EXPECT_NE(os.str().find("OK (1 checks)"), std::string::npos);
  EXPECT_EQ(check_line(check_below("n", 2.0, 1.0)).substr(0, 7), "FAIL  n");
}

TEST(Builtin, VerifyConfigPasses) {
  const auto s = builtin_verify_config();
  ASSERT_EQ(s.size(), 1u);
  const auto dir = scratch_dir("verify");
  EXPECT_TRUE(run(s[0], {dir, 1}).passed());
}

}  // namespace
}  // namespace erd
