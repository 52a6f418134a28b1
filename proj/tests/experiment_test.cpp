#include <gtest/gtest.h>

#include <filesystem>

#include "test_support.hpp"

using namespace xent;
using namespace xent::testing;

namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("xent_test_" + name + "_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(SpecIo, LoadsFixtureWithRelativeModels) {
  const auto spec = load_spec(fixture("estimate_match.json"));
  EXPECT_EQ(spec.estimator, Estimator::Match);
  EXPECT_EQ(spec.grid, (std::vector<std::uint64_t>{100, 1000, 10000}));
  EXPECT_EQ(spec.trials, 4u);
  EXPECT_EQ(spec.seed, 7u);
  EXPECT_EQ(spec.model_x_id, "two_state");
  EXPECT_EQ(spec.output, "match.csv");
  EXPECT_EQ(spec.log_base, LogBase::Nats);
}

TEST(SpecIo, InlineModelsAndOptionalKeys) {
  const Json j = Json::parse(R"({
    "estimator": "wait",
    "model_x": {"type": "markov", "transitions": [[0.5, 0.5], [0.5, 0.5]]},
    "model_y": {"type": "markov", "transitions": [[0.5, 0.5], [0.5, 0.5]]},
    "n_grid": [2, 4], "trials": 3, "seed": 1, "log_base": "bits", "reference_cap": 5000, "jobs": 2
  })");
  const auto spec = spec_from_json(j);
  EXPECT_EQ(spec.estimator, Estimator::Wait);
  EXPECT_EQ(spec.log_base, LogBase::Bits);
  EXPECT_EQ(spec.reference_cap, 5000u);
  EXPECT_EQ(spec.jobs, 2u);
}

TEST(SpecIo, Errors) {
  auto code_of = [](const char* text) {
    try {
      spec_from_json(Json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;  // not thrown
  };
  const char* model = R"({"type": "markov", "transitions": [[1]]})";
  const std::string missing_grid = std::string(R"({"estimator": "match", "model_x": )") + model +
                                   R"(, "model_y": )" + model + R"(, "n_grid": [2], "trials": 1, "seed": 1})";
  EXPECT_EQ(code_of(missing_grid.c_str()), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of(R"({"estimator": "match"})"), ErrorCode::InvalidSpec);
  EXPECT_EQ(code_of("[1, 2]"), ErrorCode::InvalidSpec);
  const std::string bad_base = std::string(R"({"estimator": "wait", "model_x": )") + model + R"(, "model_y": )" +
                               model + R"(, "n_grid": [1], "trials": 1, "seed": 1, "log_base": "dits"})";
  EXPECT_EQ(code_of(bad_base.c_str()), ErrorCode::InvalidSpec);
}

TEST(Svg, DeterministicAndWellFormed) {
  AggregateSeries s;
  s.points = {{1000, 0.6, 0.01, 4, 0}, {10000, 0.55, 0.005, 4, 0}, {100000, std::nullopt, std::nullopt, 4, 4}};
  const std::vector<PlotSeries> plot{{"run", s, 0.5}};
  const std::string a = render_svg(plot, "title", "value");
  EXPECT_EQ(a, render_svg(plot, "title", "value"));
  EXPECT_NE(a.find("<svg"), std::string::npos);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
}

TEST(Figure1, FixtureMatchesBundledFiles) {
  const auto fx = Figure1Fixture::make();
  EXPECT_TRUE(fx.chain_y.transitions().isApprox(as_markov(load_fixture("figure1_y.json"))->transitions(), 0.0));
  EXPECT_TRUE(fx.chain_x_diff.transitions().isApprox(as_markov(load_fixture("figure1_x_diff.json"))->transitions(), 0.0));
}

TEST(Figure1, SmallRunWritesReproducibleArtifacts) {
  Figure1Options o;
  o.trials = 3;
  o.seed = 11;
  o.m_grid = {100, 300, 1000, 3000, 10000, 30000, 100000};
  const auto r = run_figure1(o);
  const auto fx = Figure1Fixture::make();
  EXPECT_NEAR(r.same.reference, entropy_rate(fx.chain_y), 1e-15);
  EXPECT_EQ(r.same.series.points.size(), 7u);
  o.jobs = 2;
  EXPECT_EQ(run_figure1(o).diff.series, r.diff.series);

  const fs::path dir = scratch_dir("figure1");
  const auto files = write_figure1(r, dir);
  for (const auto& p : {files.same_csv, files.diff_csv, files.svg, files.meta}) EXPECT_TRUE(fs::exists(p)) << p;
  const std::string csv = read_text_file(files.same_csv);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 8);
  EXPECT_EQ(regenerate_figure1_svg(dir), read_text_file(files.svg));
  const Json meta = read_json_file(files.meta);
  EXPECT_EQ(meta.at("seed").get<std::uint64_t>(), 11u);
  EXPECT_EQ(meta.at("trials").get<std::size_t>(), 3u);
  fs::remove_all(dir);
}
