#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "padic_walk/cli/commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "padic-walk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = padic::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("padic_walk_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  [[nodiscard]] std::string file(const std::string& name) const { return (dir_ / name).string(); }

  // Runs args writing to `first`, then reruns from that file's embedded
  // config writing to `second`, and returns both contents.
  std::pair<std::string, std::string> rerun(std::vector<std::string> args, const std::string& ext) {
    const std::string a = file("first." + ext), b = file("second." + ext);
    args.push_back("--out");
    args.push_back(a);
    const Outcome first = cli(args);
    EXPECT_EQ(first.code, 0) << first.err;
    const Outcome second = cli({"--config", a, "--out", b});
    EXPECT_EQ(second.code, 0) << second.err;
    return {slurp(a), slurp(b)};
  }

  fs::path dir_;
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_F(CliTest, SimulateWritesOnePathPerLine) {
  const Outcome o = cli({"simulate", "--p", "2", "--b", "1", "--m", "5", "--T", "1", "--samples", "10", "--seed", "42"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(count_lines(o.out), 10u);
  std::istringstream lines(o.out);
  std::string line;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::ordered_json::parse(line);
    EXPECT_EQ(j["m"], 5);
    EXPECT_EQ(j["states"].size(), 23u);
    EXPECT_EQ(j["config"]["seed"], 42);
  }
  EXPECT_EQ(cli({"simulate", "--p", "2", "--b", "1", "--m", "5", "--T", "1", "--samples", "10", "--seed", "42"}).out, o.out);
}

TEST_F(CliTest, SimulateZeroSamplesIsEmpty) {
  const Outcome o = cli({"simulate", "--m", "3", "--samples", "0", "--out", file("empty.jsonl")});
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(fs::exists(file("empty.jsonl")));
  EXPECT_EQ(fs::file_size(file("empty.jsonl")), 0u);
}

TEST_F(CliTest, ThreadCountDoesNotChangeOutput) {
  const auto base = std::vector<std::string>{"simulate", "--m", "4", "--samples", "50", "--seed", "3", "--format", "csv"};
  auto one = base, many = base;
  one.insert(one.end(), {"--threads", "1"});
  many.insert(many.end(), {"--threads", "4"});
  EXPECT_EQ(cli(one).out, cli(many).out);
}

TEST_F(CliTest, RerunIsByteIdentical) {
  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"simulate", "--m", "3,5", "--samples", "4", "--seed", "9"}, "jsonl"},
      {{"simulate", "--m", "3", "--samples", "4", "--format", "csv"}, "csv"},
      {{"simulate", "--m", "2", "--samples", "3", "--format", "json"}, "json"},
      {{"density", "--p", "3", "--t", "0.5,2"}, "csv"},
      {{"density", "--format", "jsonl"}, "jsonl"},
      {{"charfn", "--m", "2,6", "--t", "1"}, "csv"},
      {{"charfn", "--format", "json"}, "json"},
      {{"converge", "--m", "2,4", "--samples", "1000", "--seed", "5"}, "csv"},
      {{"moments", "--p", "5", "--b", "0.5"}, "csv"},
      {{"verify", "--grid", "2:1", "--samples", "0"}, "json"},
  };
  for (const auto& [args, ext] : cases) {
    const auto [a, b] = rerun(args, ext);
    EXPECT_FALSE(a.empty()) << args.front();
    EXPECT_EQ(a, b) << args.front() << " " << ext;
  }
}

TEST_F(CliTest, FlatConfigFileAndFlagOverride) {
  {
    std::ofstream cfg(file("run.cfg"));
    cfg << "command = density\np = 3\nt = 1\n";
  }
  const Outcome from_file = cli({"--config", file("run.cfg")});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("\"p\":3"), std::string::npos);
  const Outcome overridden = cli({"--config", file("run.cfg"), "--p", "5"});
  ASSERT_EQ(overridden.code, 0) << overridden.err;
  EXPECT_NE(overridden.out.find("\"p\":5"), std::string::npos);
}

TEST_F(CliTest, DensityRowForUnitBall) {
  const Outcome o = cli({"density", "--p", "2", "--b", "1", "--sigma", "1", "--t", "1", "--k-min", "-3", "--k-max", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("k,radius,density,density_tail,shell_mass,ball_prob,ball_tail"), std::string::npos);
  EXPECT_NE(o.out.find("\n0,1,"), std::string::npos);
  EXPECT_NE(o.out.find(",0.548042791529"), std::string::npos);
}

TEST_F(CliTest, DensityLargeTimeSpreadsOut) {
  const Outcome o = cli({"density", "--t", "1000", "--format", "json", "--k-min", "0", "--k-max", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::ordered_json::parse(o.out);
  const auto& table = j["tables"][0];
  const auto& cols = table["columns"];
  std::size_t c = 0;
  while (cols[c] != "ball_prob") ++c;
  EXPECT_LT(table["rows"][0][c].get<double>(), 0.05);
}

TEST_F(CliTest, ConvergeExactOnlyIgnoresSeed) {
  const Outcome a = cli({"converge", "--exact-only", "--seed", "1", "--m", "2,4,6"});
  const Outcome b = cli({"converge", "--exact-only", "--seed", "2", "--m", "2,4,6"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const auto body = [](const std::string& s) {
    std::istringstream in(s);
    std::string line, outp;
    while (std::getline(in, line)) {
      if (line.rfind("# config", 0) == 0 || line.find("seed") != std::string::npos) continue;
      outp += line + "\n";
    }
    return outp;
  };
  EXPECT_EQ(body(a.out), body(b.out));
}

TEST_F(CliTest, DefaultVerifyPasses) {
  const Outcome o = cli({"verify"});
  EXPECT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::ordered_json::parse(o.out);
  EXPECT_TRUE(j.contains("config"));
}

TEST_F(CliTest, PerturbedAlphaIsCaught) {
  const Outcome o = cli({"verify", "--grid", "2:1", "--samples", "0", "--perturb-alpha", "1.01"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.out.find("\"passed\": false"), std::string::npos);
}

TEST_F(CliTest, ListNamesChecks) {
  const Outcome o = cli({"verify", "--list"});
  EXPECT_EQ(o.code, 0);
  for (const char* name : {"conv", "fourier", "alpha", "moments", "chentsov", "wendel"}) {
    EXPECT_NE(o.out.find(name), std::string::npos) << name;
  }
}

TEST_F(CliTest, ConfigErrorsExitTwo) {
  const Outcome bad_p = cli({"density", "--p", "4"});
  EXPECT_EQ(bad_p.code, 2);
  EXPECT_NE(bad_p.err.find("p"), std::string::npos);
  EXPECT_EQ(cli({"converge", "--m", "6,4"}).code, 2);
  EXPECT_EQ(cli({"density", "--t", "0"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"converge", "--samples", "10"}).code, 2);
  EXPECT_EQ(cli({"simulate", "--nonsense", "1"}).code, 2);
}

TEST_F(CliTest, ResourceCapExitsThree) {
  const Outcome o = cli({"simulate", "--m", "20", "--T", "10", "--samples", "1", "--step-cap", "1000"});
  EXPECT_EQ(o.code, 3);
}

TEST_F(CliTest, VersionFlag) {
  const Outcome o = cli({"--version"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find(padic::cli::kVersion), std::string::npos);
}
