#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "xent/error.hpp"
#include "xent/matching/profiles.hpp"
#include "xent/types.hpp"

namespace xent {

/// Knuth-Morris-Pratt scanner that consumes y one symbol at a time and
/// records the first end position of every prefix x_1^l, l <= n_max. Lets a
/// reference path be realized lazily and abandoned as soon as every prefix
/// has been seen.
///
/// The first time the matched length reaches l is the first end of x_1^l:
/// any earlier occurrence of a longer prefix would contain one of x_1^l.
class PrefixScanner {
 public:
  PrefixScanner(WordView x, std::size_t n_max) : pattern_(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n_max)) {
    require(n_max >= 1, ErrorCode::InvalidArgument, "n_max must be at least 1");
    require(n_max <= x.size(), ErrorCode::PatternTooLong, "n_max exceeds |x|");
    border_.assign(n_max + 1, 0);
    std::size_t k = 0;
    for (std::size_t i = 1; i < n_max; ++i) {
      while (k > 0 && pattern_[i] != pattern_[k]) k = border_[k];
      if (pattern_[i] == pattern_[k]) ++k;
      border_[i + 1] = k;
    }
    first_end_.reserve(n_max);
  }

  void feed(Symbol a) {
    ++consumed_;
    if (matched_ == pattern_.size()) matched_ = border_[matched_];
    while (matched_ > 0 && pattern_[matched_] != a) matched_ = border_[matched_];
    if (pattern_[matched_] == a) ++matched_;
    if (matched_ > first_end_.size()) first_end_.push_back(consumed_);
  }

  bool complete() const noexcept { return first_end_.size() == pattern_.size(); }
  std::uint64_t consumed() const noexcept { return consumed_; }

  WaitingProfile profile() const {
    WaitingProfile out;
    out.y_length = consumed_;
    out.values.assign(pattern_.size(), std::nullopt);
    for (std::size_t i = 0; i < first_end_.size(); ++i) out.values[i] = first_end_[i] - i;
    return out;
  }

 private:
  Word pattern_;
  std::vector<std::size_t> border_;
  std::vector<std::uint64_t> first_end_;
  std::size_t matched_ = 0;
  std::uint64_t consumed_ = 0;
};

/// Waiting profile against a path drawn from `next_symbol()` on demand, up to
/// `max_y_length` symbols.
template <class Source>
WaitingProfile scan_waiting_profile(WordView x, std::size_t n_max, Source&& next_symbol, std::uint64_t max_y_length) {
  PrefixScanner scanner(x, n_max);
  while (!scanner.complete() && scanner.consumed() < max_y_length) scanner.feed(next_symbol());
  return scanner.profile();
}

inline WaitingProfile scan_waiting_profile(WordView x, WordView y, std::size_t n_max) {
  std::size_t i = 0;
  auto profile = scan_waiting_profile(x, n_max, [&] { return y[i++]; }, y.size());
  profile.y_length = y.size();
  return profile;
}

}  // namespace xent
