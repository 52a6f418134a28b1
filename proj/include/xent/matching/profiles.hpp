#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/types.hpp"

namespace xent {

/// W_l(x, y) for l = 1..n_max: the 1-based start of the first occurrence of
/// x_1^l in y, or nullopt (Absent) when y_1^{y_length} does not contain it.
struct WaitingProfile {
  std::vector<std::optional<std::uint64_t>> values;  // values[l-1] = W_l
  std::uint64_t y_length = 0;

  std::size_t n_max() const noexcept { return values.size(); }
  const std::optional<std::uint64_t>& at(std::size_t ell) const {
    require(ell >= 1 && ell <= values.size(), ErrorCode::InvalidArgument,
            "profile has no entry for length " + std::to_string(ell));
    return values[ell - 1];
  }

  friend bool operator==(const WaitingProfile&, const WaitingProfile&) = default;
};

/// L_m(x, y) on a grid of window lengths m; 0 encodes an empty match set.
struct MatchProfile {
  std::map<std::uint64_t, std::uint64_t> entries;
  std::size_t pattern_length = 0;  // |x| used; L_m == pattern_length may be a lower bound

  bool saturated(std::uint64_t m) const { return pattern_length > 0 && entries.at(m) >= pattern_length; }

  friend bool operator==(const MatchProfile&, const MatchProfile&) = default;
};

/// Throws InvalidArgument when a waiting profile breaks its structural invariants.
inline void check_invariants(const WaitingProfile& p) {
  bool absent = false;
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    const std::uint64_t ell = i + 1;
    const auto& v = p.values[i];
    if (!v) {
      absent = true;
      continue;
    }
    require(!absent, ErrorCode::InvalidArgument, "profile defined again after an Absent entry");
    require(*v >= 1 && *v >= prev, ErrorCode::InvalidArgument, "waiting times must be positive and nondecreasing");
    require(*v + ell - 1 <= p.y_length, ErrorCode::InvalidArgument, "waiting time runs past the end of y");
    prev = *v;
  }
}

inline void check_invariants(const MatchProfile& p) {
  std::optional<std::pair<std::uint64_t, std::uint64_t>> prev;
  for (const auto& [m, len] : p.entries) {
    require(m == 0 ? len == 0 : len <= m - 1, ErrorCode::InvalidArgument, "L_m exceeds m - 1");
    if (prev) {
      require(len >= prev->second, ErrorCode::InvalidArgument, "L_m must be nondecreasing in m");
      require(len <= prev->second + (m - prev->first), ErrorCode::InvalidArgument, "L_m grows faster than m");
    }
    prev = {m, len};
  }
}

/// O(n |y|) scan: first k with y_k^{k+n-1} = x_1^n.
inline std::optional<std::uint64_t> waiting_time_naive(WordView x, WordView y, std::size_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "pattern length must be at least 1");
  require(n <= x.size(), ErrorCode::PatternTooLong,
          "pattern length " + std::to_string(n) + " exceeds |x| = " + std::to_string(x.size()));
  if (n > y.size()) return std::nullopt;
  for (std::size_t k = 0; k + n <= y.size(); ++k) {
    if (std::equal(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), y.begin() + static_cast<std::ptrdiff_t>(k)))
      return k + 1;
  }
  return std::nullopt;
}

inline WaitingProfile waiting_profile_naive(WordView x, WordView y, std::size_t n_max) {
  require(n_max <= x.size(), ErrorCode::PatternTooLong, "n_max exceeds |x|");
  WaitingProfile out;
  out.y_length = y.size();
  out.values.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) out.values.push_back(waiting_time_naive(x, y, n));
  return out;
}

/// max{l : y_k^{k+l-1} = x_1^l for some 1 <= k <= m - l}, 0 if none, by
/// direct search over start positions.
inline std::uint64_t match_length_naive(WordView x, WordView y, std::uint64_t m) {
  require(m <= y.size(), ErrorCode::InvalidArgument, "window m exceeds |y|");
  std::uint64_t best = 0;
  for (std::uint64_t k = 1; k + 1 <= m; ++k) {
    const std::uint64_t cap = std::min<std::uint64_t>(m - k, x.size());
    std::uint64_t ell = 0;
    while (ell < cap && y[k - 1 + ell] == x[ell]) ++ell;
    best = std::max(best, ell);
  }
  return best;
}

/// L_m from the waiting profile, using admissibility W_l <= m - l.
inline MatchProfile match_profile_from_waiting(const WaitingProfile& profile, std::span<const std::uint64_t> m_grid) {
  MatchProfile out;
  out.pattern_length = profile.n_max();
  std::size_t ell = 0;  // largest admissible length found so far; monotone in m
  std::uint64_t prev_m = 0;
  for (std::uint64_t m : m_grid) {
    require(m <= profile.y_length, ErrorCode::GridExceedsWindow,
            "window " + std::to_string(m) + " exceeds |y| = " + std::to_string(profile.y_length));
    require(out.entries.empty() || m > prev_m, ErrorCode::InvalidArgument, "m grid must be strictly increasing");
    prev_m = m;
    while (ell < profile.n_max()) {
      const auto& w = profile.values[ell];
      if (!w || *w + (ell + 1) > m) break;
      ++ell;
    }
    out.entries[m] = ell;
  }
  return out;
}

}  // namespace xent
