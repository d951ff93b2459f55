#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace mmcheck {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mmcheck_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, EmptyTraceIsConsistent) {
  CliResult r = run_cli({"check", file("e.mmh", "")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verdict: consistent"), std::string::npos);
  EXPECT_NE(r.out.find("k: 0"), std::string::npos);
}

TEST_F(CliTest, StoreBufferingExitCodes) {
  std::string sb = file("sb.mmh", fixtures::kStoreBuffering);
  CliResult sc = run_cli({"check", "--model", "sc", sb});
  EXPECT_EQ(sc.code, 1);
  EXPECT_NE(sc.out.find("diagnostics:"), std::string::npos);
  CliResult tso = run_cli({"check", "--model", "TSO", "--witness", "--stats", sb});
  EXPECT_EQ(tso.code, 0);
  EXPECT_NE(tso.out.find("tw: init:0 < init:1"), std::string::npos) << tso.out;
  EXPECT_NE(tso.out.find("subsets: "), std::string::npos);
  EXPECT_NE(tso.out.find("elapsed_ms: "), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  std::string sb = file("sb.mmh", fixtures::kStoreBuffering);
  EXPECT_EQ(run_cli({"check", "--model", "xyz", sb}).code, 2);
  EXPECT_EQ(run_cli({"check"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"check", (dir_ / "missing.mmh").string()}).code, 2);
  CliResult bad = run_cli({"check", file("bad.mmh", "thread T0\nwr x 1\nwr x 1\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("DuplicateValue"), std::string::npos);
  EXPECT_EQ(run_cli({"oracle", "--oracle-mode", "fancy", sb}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, ResourceErrors) {
  std::string sb = file("sb.mmh", fixtures::kStoreBuffering);
  CliResult r = run_cli({"check", "--max-k", "2", sb});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("KTooLarge"), std::string::npos);
  std::string wide = "thread T0\n";
  for (int i = 0; i < 9; ++i) {
    wide += "wr v" + std::to_string(i) + " 1\n";
  }
  EXPECT_EQ(run_cli({"oracle", file("wide.mmh", wide)}).code, 3);
}

TEST_F(CliTest, OracleAgreesWithCheck) {
  std::string sb = file("sb.mmh", fixtures::kStoreBuffering);
  std::string mp = file("mp.mmh", fixtures::kMessagePassing);
  for (const std::string& path : {sb, mp}) {
    for (const char* model : {"sc", "tso", "pso", "rmo"}) {
      int check = run_cli({"check", "--model", model, path}).code;
      EXPECT_EQ(run_cli({"oracle", "--model", model, path}).code, check);
      EXPECT_EQ(run_cli({"oracle", "--oracle-mode", "store", "--model", model, path}).code, check);
    }
  }
}

TEST_F(CliTest, InitReadWarningForRelaxedModels) {
  std::string sb = file("sb.mmh", fixtures::kStoreBuffering);
  EXPECT_NE(run_cli({"check", "--model", "tso", sb}).err.find("warning:"), std::string::npos);
  EXPECT_EQ(run_cli({"check", "--model", "sc", sb}).err.find("warning:"), std::string::npos);
}

TEST_F(CliTest, GenSatProducesParsableTraces) {
  std::string unsat = file("u.cnf", "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
  CliResult sc = run_cli({"gen", "sat", unsat});
  ASSERT_EQ(sc.code, 0);
  EXPECT_FALSE(solve(parse_history(sc.out), ModelSpec::of(ModelName::SC)).consistent());
  std::string out = (dir_ / "rel.mmh").string();
  ASSERT_EQ(run_cli({"gen", "sat", "--variant", "relaxed", unsat, "-o", out}).code, 0);
  EXPECT_EQ(run_cli({"check", "--model", "pso", out}).code, 1);
  EXPECT_EQ(run_cli({"gen", "sat", "--variant", "weird", unsat}).code, 2);
  EXPECT_EQ(run_cli({"gen", "sat", file("two.cnf", "p cnf 2 1\n1 2 0\n")}).code, 2);
}

TEST_F(CliTest, GenRandomIsDeterministic) {
  std::vector<std::string> args = {"gen", "random", "--model", "tso", "--threads", "3", "--events", "4", "--seed", "42"};
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  std::string path = file("g.mmh", a.out);
  EXPECT_EQ(run_cli({"check", "--model", "tso", path}).code, 0);
  EXPECT_EQ(run_cli({"gen", "random", "--model", "rmo"}).code, 2);
}

TEST_F(CliTest, MutateWritesExplicitRf) {
  std::string sb = file("sb.mmh", fixtures::kStoreBuffering);
  CliResult r = run_cli({"mutate", "--seed", "1", sb});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("rf "), std::string::npos);
  EXPECT_NO_THROW(parse_history(r.out));
  EXPECT_EQ(run_cli({"mutate", file("one.mmh", "thread T0\nwr x 1\n")}).code, 2);
}

}  // namespace
}  // namespace mmcheck
