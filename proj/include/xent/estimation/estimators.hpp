#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/matching/prefix_scanner.hpp"
#include "xent/matching/profiles.hpp"
#include "xent/models/model.hpp"

namespace xent {

enum class Axis { N, M };

inline std::string to_string(Axis axis) { return axis == Axis::N ? "n" : "m"; }

/// One grid point of an estimator sequence; nullopt marks a censored point.
struct EstimatePoint {
  std::uint64_t index = 0;
  std::optional<double> value;

  bool censored() const noexcept { return !value.has_value(); }
  friend bool operator==(const EstimatePoint&, const EstimatePoint&) = default;
};

struct EstimateSeries {
  Axis axis = Axis::N;
  std::vector<EstimatePoint> points;
  std::string model_x;
  std::string model_y;
  std::uint64_t seed = 0;

  friend bool operator==(const EstimateSeries&, const EstimateSeries&) = default;
};

namespace detail {

inline void check_grid(std::span<const std::uint64_t> grid, std::uint64_t lo, std::uint64_t hi, const char* what) {
  require(!grid.empty(), ErrorCode::InvalidArgument, std::string(what) + " grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= lo && grid[i] <= hi, ErrorCode::InvalidArgument,
            std::string(what) + " grid value " + std::to_string(grid[i]) + " outside [" + std::to_string(lo) +
                ", " + std::to_string(hi) + "]");
    require(i == 0 || grid[i] > grid[i - 1], ErrorCode::InvalidArgument,
            std::string(what) + " grid must be strictly increasing");
  }
}

}  // namespace detail

/// log(W_n) / n on the grid; Absent waiting times are censored.
inline EstimateSeries waiting_estimator(const WaitingProfile& profile, std::span<const std::uint64_t> n_grid) {
  detail::check_grid(n_grid, 1, profile.n_max(), "n");
  EstimateSeries out;
  out.axis = Axis::N;
  for (std::uint64_t n : n_grid) {
    const auto& w = profile.values[n - 1];
    EstimatePoint pt{n, std::nullopt};
    if (w) pt.value = std::log(static_cast<double>(*w)) / static_cast<double>(n);
    out.points.push_back(pt);
  }
  return out;
}

/// log(m) / L_m at every grid point of the profile; L_m = 0 is censored.
inline EstimateSeries match_estimator(const MatchProfile& profile) {
  require(!profile.entries.empty(), ErrorCode::InvalidArgument, "match profile is empty");
  EstimateSeries out;
  out.axis = Axis::M;
  for (const auto& [m, len] : profile.entries) {
    EstimatePoint pt{m, std::nullopt};
    if (len > 0) pt.value = std::log(static_cast<double>(m)) / static_cast<double>(len);
    out.points.push_back(pt);
  }
  return out;
}

/// (1/n) log[W_n P_Y(x_1^n)]; nullopt when W_n is Absent.
struct NormalizedStatistic {
  std::uint64_t n = 0;
  std::optional<double> value;
};

inline NormalizedStatistic normalized_statistic(std::optional<std::uint64_t> waiting, double log_prob_y,
                                                std::uint64_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "n must be at least 1");
  NormalizedStatistic out{n, std::nullopt};
  if (!waiting) return out;
  if (log_prob_y == kNegInf) {
    fail(ErrorCode::AbsoluteContinuityViolation,
         "x_1^" + std::to_string(n) + " occurs in y but has zero probability under the Y model");
  }
  out.value = (std::log(static_cast<double>(*waiting)) + log_prob_y) / static_cast<double>(n);
  return out;
}

inline NormalizedStatistic normalized_statistic(WordView x, WordView y, const Model& model_y, std::uint64_t n) {
  const WaitingProfile profile = scan_waiting_profile(x, y, n);
  return normalized_statistic(profile.values[n - 1], marginal_log_prob(model_y, x.first(n)), n);
}

/// The statistic on a grid, sharing one waiting profile and one prefix scan of x.
inline EstimateSeries normalized_statistic_series(const WaitingProfile& profile, WordView x, const Model& model_y,
                                                  std::span<const std::uint64_t> n_grid) {
  detail::check_grid(n_grid, 1, profile.n_max(), "n");
  require(x.size() >= n_grid.back(), ErrorCode::PatternTooLong, "x shorter than the largest n");
  EstimateSeries out;
  out.axis = Axis::N;
  PrefixScorer scorer(model_y);
  auto state = scorer.initial();
  std::size_t done = 0;
  for (std::uint64_t n : n_grid) {
    for (; done < n; ++done) state = scorer.extend(state, x[done]);
    const auto stat = normalized_statistic(profile.values[n - 1], state.log_prob, n);
    out.points.push_back({n, stat.value});
  }
  return out;
}

}  // namespace xent
