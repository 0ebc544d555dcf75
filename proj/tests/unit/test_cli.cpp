#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "affcyl/cli.hpp"
#include "affcyl/corpus.hpp"
#include "affcyl/error.hpp"
#include "affcyl/serialize.hpp"

using namespace affcyl;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("affcyl_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_entry(const CorpusEntry& e) const {
    const fs::path p = dir_ / (e.name + ".json");
    std::ofstream(p) << dump(to_json(e.spec));
    return p;
  }

  static int tool(const std::string& args) {
    const int status = std::system((std::string(AFFCYL_TOOL) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

} // namespace

TEST_F(CliTest, MalformedJsonReportsLineAndColumn) {
  const fs::path p = dir_ / "broken.json";
  std::ofstream(p) << "{\n  \"kind\": \"chart\",\n  \"map\": [1, 2,,]\n}\n";
  try {
    load_spec_file(p);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  EXPECT_EQ(tool("classify " + p.string()), 1);
}

TEST_F(CliTest, ExitCodesFollowVerdicts) {
  EXPECT_EQ(tool("classify " + write_entry(veronese_cylinder()).string()), 0);
  EXPECT_EQ(tool("classify " + write_entry(veronese_cone()).string()), 0);
  EXPECT_EQ(tool("classify " + write_entry(sacksteder()).string()), 2);
  EXPECT_EQ(tool("classify " + write_entry(random_regular_example(1, 2, 2, 6)).string()), 3);
  EXPECT_EQ(tool("classify " + write_entry(paraboloid()).string()), 4);
  EXPECT_EQ(tool("classify --tol-rank -1 " + write_entry(paraboloid()).string()), 1);
}

TEST_F(CliTest, AnalyzeReportsFocalPolynomialOfCylinder) {
  RunConfig cfg;
  const auto res = cmd_analyze(write_entry(veronese_cylinder()), cfg);
  const auto j = nlohmann::json::parse(res.output);
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("r"), 2);
  EXPECT_EQ(j.at("config").at("seed"), 0);
  const auto& mons = j.at("evidence").at(0).at("focal_polynomial").at("monomials");
  ASSERT_EQ(mons.size(), 1u);
  EXPECT_EQ(mons[0].at("exps"), nlohmann::json::parse("[2, 0, 0]"));
  EXPECT_EQ(mons[0].at("re"), 1.0);
}

TEST_F(CliTest, AnalyzeIsByteIdentical) {
  const auto p = write_entry(random_cone(5));
  const fs::path a = dir_ / "a.json", b = dir_ / "b.json";
  EXPECT_EQ(tool("analyze --seed 3 -o " + a.string() + " " + p.string()), 0);
  EXPECT_EQ(tool("analyze --seed 3 -o " + b.string() + " " + p.string()), 0);
  EXPECT_FALSE(slurp(a).empty());
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(CliTest, BatchKeepsInputOrder) {
  RunConfig cfg;
  cfg.format = "csv";
  const auto res = cmd_classify({write_entry(paraboloid()), write_entry(veronese_cylinder()), write_entry(sacksteder())}, cfg);
  EXPECT_EQ(res.exit_code, 4);
  std::istringstream is(res.output);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "name,r,l,m,verdict,max_residual");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("paraboloid,", 0), 0u);
  std::getline(is, line);
  EXPECT_EQ(line.rfind("veronese_cylinder,2,2,2,Cylinder,", 0), 0u);
  std::getline(is, line);
  EXPECT_EQ(line.rfind("sacksteder,2,1,", 0), 0u);
}

TEST_F(CliTest, CorpusGenerateAndVerify) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  EXPECT_EQ(tool("corpus gen --seed 7 --out " + a.string()), 0);
  EXPECT_EQ(tool("corpus gen --seed 7 --out " + b.string()), 0);
  const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
  EXPECT_GE(manifest.at("entries").size(), 6u);
  for (const auto& entry : fs::directory_iterator(a))
    EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
  EXPECT_EQ(tool("corpus verify --dir " + a.string()), 0);

  // Tamper with one expectation: verify must notice.
  auto j = nlohmann::json::parse(slurp(a / "veronese_cylinder.json"));
  j["expected"]["verdict"] = "Cone";
  std::ofstream(a / "veronese_cylinder.json") << dump(j);
  const auto res = cmd_corpus_verify(a, RunConfig{});
  EXPECT_EQ(res.exit_code, kExitCorpusMismatch);
  EXPECT_NE(res.output.find("FAIL veronese_cylinder"), std::string::npos);
}

TEST_F(CliTest, SpecRoundTrip) {
  for (const auto& e : standard_corpus(7)) {
    const auto p = write_entry(e);
    EXPECT_EQ(dump(to_json(load_spec_file(p))), slurp(p)) << e.name;
  }
}
