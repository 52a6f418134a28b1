#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "xent/estimation/monte_carlo.hpp"
#include "xent/experiment/svg.hpp"
#include "xent/models/model_io.hpp"

namespace xent {

/// Two 4-letter chains of period 2 with classes {0,1} and {2,3} and the same
/// zero pattern. The reference path is drawn from chain_y; patterns come from
/// chain_y itself or from chain_x_diff.
struct Figure1Fixture {
  FiniteMarkovChain chain_y;
  FiniteMarkovChain chain_x_diff;

  const FiniteMarkovChain& chain_x_same() const noexcept { return chain_y; }

  static Figure1Fixture make() {
    Matrix y(4, 4), x(4, 4);
    y << 0, 0, 0.7, 0.3,  //
        0, 0, 0.4, 0.6,   //
        0.5, 0.5, 0, 0,   //
        0.2, 0.8, 0, 0;
    x << 0, 0, 0.5, 0.5,  //
        0, 0, 0.8, 0.2,   //
        0.3, 0.7, 0, 0,   //
        0.6, 0.4, 0, 0;
    return {FiniteMarkovChain(y), FiniteMarkovChain(x)};
  }
};

inline const std::vector<std::uint64_t>& figure1_m_grid() {
  static const std::vector<std::uint64_t> grid{1'000, 3'000, 10'000, 30'000, 100'000, 300'000, 1'000'000};
  return grid;
}

struct Figure1Options {
  std::size_t trials = 32;
  std::uint64_t seed = 20240601;
  unsigned jobs = 0;
  std::vector<std::uint64_t> m_grid = figure1_m_grid();
};

struct Figure1Case {
  std::string name;  // "same" or "diff"
  double reference = 0.0;
  AggregateSeries series;
};

struct Figure1Result {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  Figure1Case same;
  Figure1Case diff;
};

/// Runs both cases. They share the base seed, so the two cases see the same
/// reference paths.
inline Figure1Result run_figure1(const Figure1Options& options = {}) {
  const Figure1Fixture fx = Figure1Fixture::make();
  auto y = std::make_shared<const Model>(fx.chain_y);
  auto x_diff = std::make_shared<const Model>(fx.chain_x_diff);

  ExperimentSpec spec;
  spec.estimator = Estimator::Match;
  spec.model_y = y;
  spec.model_y_id = "chain_y";
  spec.grid = options.m_grid;
  spec.trials = options.trials;
  spec.seed = options.seed;
  spec.jobs = options.jobs;

  Figure1Result out;
  out.seed = options.seed;
  out.trials = options.trials;

  spec.model_x = y;
  spec.model_x_id = "chain_y";
  out.same = {"same", cross_entropy_rate(fx.chain_y, fx.chain_y), monte_carlo(spec)};

  spec.model_x = x_diff;
  spec.model_x_id = "chain_x_diff";
  out.diff = {"diff", cross_entropy_rate(fx.chain_x_diff, fx.chain_y), monte_carlo(spec)};
  return out;
}

inline std::string aggregate_csv_text(const AggregateSeries& s, LogBase base = LogBase::Nats) {
  std::ostringstream os;
  write_aggregate_csv(os, s, base);
  return os.str();
}

inline std::string figure1_svg_from_csv(const std::string& same_csv, double same_ref, const std::string& diff_csv,
                                        double diff_ref) {
  std::istringstream a(same_csv), b(diff_csv);
  const std::vector<PlotSeries> plot{{"X = Y", read_aggregate_csv(a), same_ref},
                                     {"X != Y", read_aggregate_csv(b), diff_ref}};
  return render_svg(plot, "log m / L_m against m", "log m / L_m (nats)");
}

struct Figure1Files {
  std::filesystem::path same_csv, diff_csv, svg, meta;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorCode::Io, "write failed for " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Writes figure1_same.csv, figure1_diff.csv, figure1.json (seed, trials,
/// grid, reference values) and, if requested, figure1.svg into `dir`. The SVG
/// is rendered from the CSV text, so it can be regenerated from the files.
inline Figure1Files write_figure1(const Figure1Result& r, const std::filesystem::path& dir, bool plot = true) {
  std::filesystem::create_directories(dir);
  Figure1Files f{dir / "figure1_same.csv", dir / "figure1_diff.csv", dir / "figure1.svg", dir / "figure1.json"};
  const std::string same = aggregate_csv_text(r.same.series);
  const std::string diff = aggregate_csv_text(r.diff.series);
  write_text_file(f.same_csv, same);
  write_text_file(f.diff_csv, diff);
  std::vector<std::uint64_t> grid;
  for (const auto& p : r.same.series.points) grid.push_back(p.index);
  const Json meta{{"experiment", "figure1"},
                  {"estimator", "match"},
                  {"seed", r.seed},
                  {"trials", r.trials},
                  {"m_grid", grid},
                  {"models", {{"chain_y", model_to_json(Figure1Fixture::make().chain_y)},
                              {"chain_x_diff", model_to_json(Figure1Fixture::make().chain_x_diff)}}},
                  {"reference_nats", {{"same", r.same.reference}, {"diff", r.diff.reference}}},
                  {"csv", {{"same", f.same_csv.filename().string()}, {"diff", f.diff_csv.filename().string()}}}};
  write_text_file(f.meta, meta.dump(2) + "\n");
  if (plot) write_text_file(f.svg, figure1_svg_from_csv(same, r.same.reference, diff, r.diff.reference));
  return f;
}

/// Re-renders figure1.svg from the CSV files and metadata in `dir`.
inline std::string regenerate_figure1_svg(const std::filesystem::path& dir) {
  const Json meta = read_json_file(dir / "figure1.json");
  const auto& ref = meta.at("reference_nats");
  return figure1_svg_from_csv(read_text_file(dir / "figure1_same.csv"), ref.at("same").get<double>(),
                              read_text_file(dir / "figure1_diff.csv"), ref.at("diff").get<double>());
}

}  // namespace xent
