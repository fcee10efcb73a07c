#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "idemfact/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
};

// Runs the installed binary through the shell and captures stdout.
CliRun sh(const std::string& args) {
  std::string cmd = std::string(IDEMFACT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

// In-process, for the cases that check stderr text.
CliRun in_process(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "idemfact");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = idem::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (err_text) *err_text = err.str();
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("idemfact_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, FactorWritesVerifiableCertificate) {
  CliRun r = sh("factor --alpha 2 --x '1+1*w' --y '1*w' --out " + path("c.json"));
  ASSERT_EQ(r.code, 0);
  auto report = idem::json::parse(r.out)["report"];
  EXPECT_EQ(report["verdict"], "conforming");
  EXPECT_TRUE(report["verified"].get<bool>());
  CliRun v = sh("verify --cert " + path("c.json"));
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out.rfind("OK", 0), 0u);
}

TEST_F(Cli, FactorToStdoutRoundTrips) {
  CliRun r = sh("factor --alpha 10 --x 2 --y '1*w'");
  ASSERT_EQ(r.code, 0);
  auto doc = idem::json::parse(r.out);
  EXPECT_EQ(doc["report"]["bounds"]["r"], 15);
  EXPECT_EQ(doc["report"]["bounds"]["s"], 19);
  EXPECT_EQ(doc["report"]["counts"]["r"], doc["certificate"]["counts"]["r"]);
  std::ofstream(path("all.json")) << r.out;
  EXPECT_EQ(sh("verify --cert " + path("all.json")).code, 0);
}

TEST_F(Cli, BadRing) {
  std::string err;
  CliRun r = in_process({"factor", "--alpha", "12", "--x", "1", "--y", "w"}, &err);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(err.find("alpha not square-free"), std::string::npos);
  EXPECT_EQ(sh("factor --alpha 8 --x 1 --y w").code, 2);
  EXPECT_EQ(sh("factor --alpha abc --x 1 --y w").code, 2);
  EXPECT_EQ(sh("factor --alpha 2 --x '1+' --y w").code, 2);
  EXPECT_EQ(sh("factor --alpha 2").code, 2);
  EXPECT_EQ(sh("nonsense").code, 2);
}

TEST_F(Cli, TamperedCertificateNamesTheFactor) {
  ASSERT_EQ(sh("factor --alpha 5 --x '3+2*w' --y '(4,-1)' --out " + path("c.json")).code, 0);
  auto j = idem::json::parse(slurp(path("c.json")));
  ASSERT_GE(j["idempotents"].size(), 2u);
  j["idempotents"][1][0] = "(7,7)";
  std::ofstream(path("bad.json")) << j.dump();
  CliRun v = sh("verify --cert " + path("bad.json"));
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("idempotent 1"), std::string::npos) << v.out;
}

TEST_F(Cli, DeclaredCountsMustMatch) {
  ASSERT_EQ(sh("factor --alpha 3 --x 4 --y '1+w' --out " + path("c.json")).code, 0);
  auto j = idem::json::parse(slurp(path("c.json")));
  j["counts"]["r"] = j["counts"]["r"].get<int>() + 1;
  std::ofstream(path("bad.json")) << j.dump();
  EXPECT_EQ(sh("verify --cert " + path("bad.json")).code, 1);
}

TEST_F(Cli, TruncatedOrMissingFile) {
  ASSERT_EQ(sh("factor --alpha 3 --x 4 --y '1+w' --out " + path("c.json")).code, 0);
  std::string text = slurp(path("c.json"));
  std::ofstream(path("cut.json")) << text.substr(0, text.size() / 2);
  EXPECT_EQ(sh("verify --cert " + path("cut.json")).code, 2);
  EXPECT_EQ(sh("verify --cert " + path("missing.json")).code, 2);
}

TEST_F(Cli, BatchIsDeterministic) {
  std::string args = "batch --alpha 2 --samples 100 --height 10 --seed 7 --csv ";
  ASSERT_EQ(sh(args + path("a.csv")).code, 0);
  ASSERT_EQ(sh(args + path("b.csv") + " --jobs 4").code, 0);
  std::string a = slurp(path("a.csv")), b = slurp(path("b.csv"));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "alpha,x,y,r,s,n0_max,flags,verdict,micros");
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 101);
}

TEST_F(Cli, BatchSummary) {
  CliRun r = sh("batch --alpha 5 --samples 60 --height 10 --seed 3 --jobs 2 --csv " + path("s.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verified: 60/60"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("failure taxonomy: none"), std::string::npos) << r.out;

  CliRun t = sh("batch --alpha 2 --samples 50 --height 10 --seed 1");
  ASSERT_EQ(t.code, 0);
  // flag-free rows stay within the bounds
  std::istringstream lines(t.out);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line) && line.rfind("2,", 0) == 0) {
    ++rows;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      else if (c == ',' && !quoted) cells.push_back(std::exchange(cell, ""));
      else cell += c;
    }
    cells.push_back(cell);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_TRUE(cells[8].empty());  // no --timing
    if (cells[6].empty()) {
      EXPECT_LE(std::stoi(cells[3]), 15);
      EXPECT_LE(std::stoi(cells[4]), 19);
    }
  }
  EXPECT_EQ(rows, 50);
}

TEST_F(Cli, BatchTimingColumn) {
  CliRun r = sh("batch --alpha 3 --samples 3 --height 5 --seed 1 --timing");
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_NE(line.back(), ',');
}

TEST_F(Cli, RingInfo) {
  CliRun r = sh("ring-info --alpha 5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("w: (1+sqrt(5))/2"), std::string::npos);
  EXPECT_NE(r.out.find("discriminant: 5"), std::string::npos);
  EXPECT_NE(r.out.find("fundamental unit: w"), std::string::npos);
  EXPECT_EQ(sh("ring-info --alpha 4").code, 2);
}

TEST_F(Cli, BudgetEnvironmentIsAccepted) {
  CliRun r = sh("factor --alpha 10 --x 2 --y w --budget 2");
  EXPECT_EQ(r.code, 0);
  std::string cmd = "IDEMFACT_BUDGET=0.5 " + std::string(IDEMFACT_CLI_PATH) + " factor --alpha 3 --x 4 --y w >/dev/null";
  EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
}

TEST_F(Cli, BudgetExhaustionExitsThreeWithPartialReport) {
  CliRun r = sh("factor --alpha 10 --x '(7,3)' --y '(5,-11)' --budget 0.000001");
  ASSERT_EQ(r.code, 3) << r.out;
  auto report = idem::json::parse(r.out)["report"];
  EXPECT_EQ(report["verdict"], "failed");
  EXPECT_NE(report["error"].get<std::string>().find("BudgetExhausted"), std::string::npos);
}
