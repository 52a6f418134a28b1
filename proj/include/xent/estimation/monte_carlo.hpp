#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "xent/error.hpp"
#include "xent/estimation/estimators.hpp"
#include "xent/matching/match_index.hpp"
#include "xent/matching/prefix_scanner.hpp"
#include "xent/models/sampler.hpp"
#include "xent/rng.hpp"

namespace xent {

enum class Estimator { Wait, Match, Statistic };

inline std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::Wait: return "wait";
    case Estimator::Match: return "match";
    case Estimator::Statistic: return "statistic";
  }
  return "?";
}

inline Estimator estimator_from_string(const std::string& s) {
  if (s == "wait") return Estimator::Wait;
  if (s == "match") return Estimator::Match;
  if (s == "statistic") return Estimator::Statistic;
  fail(ErrorCode::InvalidSpec, "unknown estimator '" + s + "' (expected wait, match or statistic)");
}

enum class LogBase { Nats, Bits };

inline constexpr std::uint64_t kDefaultReferenceCap = 10'000'000;

/// A Monte Carlo experiment: `trials` independent (x, y) pairs, each scored
/// on the grid by the chosen estimator.
struct ExperimentSpec {
  Estimator estimator = Estimator::Match;
  std::shared_ptr<const Model> model_x;
  std::shared_ptr<const Model> model_y;
  std::string model_x_id = "X";
  std::string model_y_id = "Y";
  std::vector<std::uint64_t> grid;  // n grid for wait/statistic, m grid for match
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  // wait/statistic: y is realized lazily up to this many symbols.
  std::uint64_t reference_cap = kDefaultReferenceCap;
  unsigned jobs = 0;  // 0 = hardware concurrency

  // presentation, consumed by the CLI
  std::string output;
  std::string output_dir = ".";
  bool plot = false;
  LogBase log_base = LogBase::Nats;
};

inline void validate(const ExperimentSpec& spec) {
  require(spec.model_x && spec.model_y, ErrorCode::InvalidSpec, "both models must be set");
  require(spec.trials >= 1, ErrorCode::InvalidSpec, "trials must be at least 1");
  require(!spec.grid.empty(), ErrorCode::InvalidSpec, "grid is empty");
  for (std::size_t i = 0; i < spec.grid.size(); ++i) {
    require(spec.grid[i] >= 1, ErrorCode::InvalidSpec, "grid values must be positive");
    require(i == 0 || spec.grid[i] > spec.grid[i - 1], ErrorCode::InvalidSpec, "grid must be sorted and distinct");
  }
  require(observed_alphabet(*spec.model_x).size() == observed_alphabet(*spec.model_y).size(),
          ErrorCode::AlphabetMismatch, "X and Y models use different alphabets");
  if (spec.estimator == Estimator::Match)
    require(spec.grid.back() >= 2, ErrorCode::InvalidSpec, "match grid needs m >= 2 somewhere");
}

/// Per-trial seeds: trial t uses derive_seed(seed, t); x and y use streams 0 and 1 of it.
inline std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) { return derive_seed(base, trial); }
inline std::uint64_t x_seed(std::uint64_t trial) { return derive_seed(trial, 0); }
inline std::uint64_t y_seed(std::uint64_t trial) { return derive_seed(trial, 1); }

/// Initial pattern length for match trials: a few times log(m)/H, with H a
/// crude lower bound on the match growth rate. Saturated profiles are redone
/// with a doubled pattern, so this only has to be a reasonable first guess.
inline std::size_t initial_pattern_length(const Model& x, std::uint64_t max_m) {
  double rate = 0.05;
  if (const FiniteMarkovChain* chain = as_markov(x)) rate = std::max(rate, 0.5 * entropy_rate(*chain));
  const double guess = 4.0 * std::ceil(std::log(static_cast<double>(max_m)) / rate);
  const auto cap = static_cast<double>(max_m - 1);
  return static_cast<std::size_t>(std::clamp(guess, std::min(8.0, cap), cap));
}

inline EstimateSeries run_trial(const ExperimentSpec& spec, std::size_t trial) {
  const std::uint64_t tseed = trial_seed(spec.seed, trial);
  const Model& mx = *spec.model_x;
  const Model& my = *spec.model_y;
  EstimateSeries series;
  try {
    if (spec.estimator == Estimator::Match) {
      const std::uint64_t max_m = spec.grid.back();
      const SamplePath y = sample_path(my, max_m, y_seed(tseed));
      const MatchIndex index(y.symbols, observed_alphabet(my).size());
      std::size_t n_max = initial_pattern_length(mx, max_m);
      while (true) {
        const SamplePath x = sample_path(mx, n_max, x_seed(tseed));
        const MatchProfile mp = match_profile_from_waiting(waiting_profile(index, x.symbols, n_max), spec.grid);
        bool saturated = false;
        for (const auto& [m, len] : mp.entries) saturated = saturated || (len >= n_max && n_max < m - 1);
        if (!saturated) {
          series = match_estimator(mp);
          break;
        }
        n_max = static_cast<std::size_t>(std::min<std::uint64_t>(2 * n_max, max_m - 1));
      }
    } else {
      const std::size_t n_max = spec.grid.back();
      const SamplePath x = sample_path(mx, n_max, x_seed(tseed));
      PathSampler y(my, y_seed(tseed));
      const WaitingProfile profile =
          scan_waiting_profile(x.symbols, n_max, [&] { return y.next(); }, spec.reference_cap);
      series = spec.estimator == Estimator::Wait ? waiting_estimator(profile, spec.grid)
                                                 : normalized_statistic_series(profile, x.symbols, my, spec.grid);
    }
  } catch (const Error& e) {
    throw Error(e.code(), "in trial " + std::to_string(trial) + " (" + e.what() + ")");
  }
  series.model_x = spec.model_x_id;
  series.model_y = spec.model_y_id;
  series.seed = tseed;
  return series;
}

/// Runs every trial; the result is indexed by trial and does not depend on
/// the number of workers.
inline std::vector<EstimateSeries> run_trials(const ExperimentSpec& spec) {
  validate(spec);
  unsigned workers = spec.jobs ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, spec.trials));
  std::vector<EstimateSeries> results(spec.trials);
  std::vector<std::exception_ptr> errors(spec.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < spec.trials; t = next++) {
      try {
        results[t] = run_trial(spec, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

struct AggregatePoint {
  std::uint64_t index = 0;
  std::optional<double> mean;  // nullopt when every trial was censored
  std::optional<double> sem;
  std::size_t trial_count = 0;
  std::size_t censored_count = 0;

  friend bool operator==(const AggregatePoint&, const AggregatePoint&) = default;
};

struct AggregateSeries {
  Axis axis = Axis::N;
  std::vector<AggregatePoint> points;

  friend bool operator==(const AggregateSeries&, const AggregateSeries&) = default;
};

/// Mean and standard error (unbiased sd / sqrt(count)) of the non-censored
/// values at each grid point. Values are summed in sorted order, which makes
/// the result bit-identical under any permutation of the trials.
inline AggregateSeries aggregate(std::span<const EstimateSeries> trials) {
  require(!trials.empty(), ErrorCode::InvalidArgument, "nothing to aggregate");
  AggregateSeries out;
  out.axis = trials.front().axis;
  const std::size_t points = trials.front().points.size();
  for (const auto& t : trials) {
    require(t.points.size() == points && t.axis == out.axis, ErrorCode::InvalidArgument,
            "trial series have different grids");
  }
  std::vector<double> values;
  for (std::size_t i = 0; i < points; ++i) {
    AggregatePoint pt;
    pt.index = trials.front().points[i].index;
    pt.trial_count = trials.size();
    values.clear();
    for (const auto& t : trials) {
      require(t.points[i].index == pt.index, ErrorCode::InvalidArgument, "trial series have different grids");
      if (t.points[i].value) values.push_back(*t.points[i].value);
      else ++pt.censored_count;
    }
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      pt.mean = mean;
      pt.sem = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) /
                                       std::sqrt(static_cast<double>(values.size()))
                                 : 0.0;
    }
    out.points.push_back(pt);
  }
  return out;
}

inline AggregateSeries monte_carlo(const ExperimentSpec& spec) {
  const auto trials = run_trials(spec);
  return aggregate(trials);
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

/// CSV: index, mean, sem, trials, censored (nats unless bits requested).
inline void write_aggregate_csv(std::ostream& out, const AggregateSeries& series, LogBase base = LogBase::Nats) {
  const double scale = base == LogBase::Bits ? 1.0 / std::log(2.0) : 1.0;
  const char* unit = base == LogBase::Bits ? "bits" : "nats";
  out << "index,mean_" << unit << ",sem_" << unit << ",trials,censored\n";
  for (const auto& p : series.points) {
    out << p.index << ',' << (p.mean ? format_number(*p.mean * scale) : "nan") << ','
        << (p.sem ? format_number(*p.sem * scale) : "nan") << ',' << p.trial_count << ',' << p.censored_count
        << '\n';
  }
}

}  // namespace xent
