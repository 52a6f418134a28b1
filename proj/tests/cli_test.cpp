#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>

#include "test_support.hpp"

using namespace xent;
using namespace xent::testing;

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
CliResult run(const std::string& args) {
  const std::string cmd = std::string(XENT_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) r.out += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string fx(const std::string& name) { return fixture(name).string(); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST(Cli, ValidateGoodModel) {
  const CliResult r = run("model validate " + fx("figure1_y.json"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_TRUE(contains(r.out, "period: 2")) << r.out;
  EXPECT_TRUE(contains(r.out, "valid")) << r.out;
}

TEST(Cli, ValidateReportsEachFailure) {
  const CliResult rows = run("model validate " + fx("invalid/row_sum.json"));
  EXPECT_EQ(rows.status, 1);
  EXPECT_TRUE(contains(rows.out, "NonStochastic")) << rows.out;
  const CliResult red = run("model validate " + fx("invalid/reducible.json"));
  EXPECT_EQ(red.status, 1);
  EXPECT_TRUE(contains(red.out, "NonUniqueStationary")) << red.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("sample " + fx("two_state.json")).status, 2);
  EXPECT_EQ(run("audit sld " + fx("swap.json") + " --n-max 0").status, 2);
}

TEST(Cli, MissingFileIsFailure) {
  const CliResult r = run("sample /nonexistent.json --length 3 --seed 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(contains(r.out, "error:")) << r.out;
}

TEST(Cli, AuditExitCodes) {
  const CliResult ild = run("audit ild " + fx("swap.json") + " --n-max 3 --m-max 3");
  EXPECT_EQ(ild.status, 1) << ild.out;
  const CliResult sld = run("audit sld " + fx("swap.json") + " --n-max 3 --m-max 3 --tau 2 --json -");
  EXPECT_EQ(sld.status, 0) << sld.out;
  EXPECT_TRUE(contains(sld.out, "\"certified\": true")) << sld.out;
  const CliResult psi = run("audit psi " + fx("iid3.json") + " --ell 1");
  EXPECT_EQ(psi.status, 0) << psi.out;
  const CliResult gap = run("audit gap " + fx("ladder_sign.json") + " --a '1 1 1' --b '0 1'");
  EXPECT_EQ(gap.status, 0) << gap.out;
  EXPECT_TRUE(contains(gap.out, "minimal positive gap: 3")) << gap.out;
  EXPECT_EQ(run("audit gap " + fx("ladder_sign.json") + " --a '1 1 1' --b '0 1' --budget 1").status, 1);
}

TEST(Cli, SampleIsDeterministic) {
  const std::string args = "sample " + fx("hidden3.json") + " --length 200 --seed 42";
  const CliResult a = run(args), b = run(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  std::istringstream in(a.out);
  EXPECT_EQ(read_path(in).size(), 200u);
}

TEST(Cli, ExactCrossEntropy) {
  const CliResult r = run("exact cross-entropy " + fx("two_state.json") + " " + fx("two_state.json"));
  EXPECT_EQ(r.status, 0);
  const double h = entropy_rate(*as_markov(load_fixture("two_state.json")));
  std::ostringstream expected;
  expected << std::setprecision(12) << h;
  EXPECT_TRUE(contains(r.out, expected.str())) << r.out;
}

TEST(Cli, EstimateWritesCsvAndPlot) {
  const fs::path dir = fs::temp_directory_path() / "xent_cli_estimate";
  fs::remove_all(dir);
  fs::create_directories(dir);
  Json spec = read_json_file(fixture("estimate_match.json"));
  spec["model_x"] = fx("two_state.json");
  spec["model_y"] = fx("two_state.json");
  spec["output_dir"] = dir.string();
  spec["plot"] = true;
  write_text_file(dir / "spec.json", spec.dump());
  const CliResult r = run("estimate match --spec " + (dir / "spec.json").string() + " --jobs 2");
  ASSERT_EQ(r.status, 0) << r.out;
  const std::string csv = read_text_file(dir / "match.csv");
  EXPECT_EQ(csv.rfind("index,mean_nats,sem_nats,trials,censored\n100,", 0), 0u) << csv;
  EXPECT_TRUE(fs::exists(dir / "match.svg"));
  EXPECT_EQ(run("estimate match --spec " + (dir / "spec.json").string() + " --jobs 1").status, 0);
  EXPECT_EQ(read_text_file(dir / "match.csv"), csv);
  // wrong subcommand for the spec
  EXPECT_EQ(run("estimate wait --spec " + (dir / "spec.json").string()).status, 1);
  fs::remove_all(dir);
}
