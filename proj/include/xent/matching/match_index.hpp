#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "xent/error.hpp"
#include "xent/matching/profiles.hpp"
#include "xent/types.hpp"

namespace xent {

/// Suffix automaton over a reference sequence y. Every state carries the
/// smallest end position (1-based) of the substrings it represents, so
/// walking a pattern from the root yields first occurrences of all of its
/// prefixes at once.
class MatchIndex {
 public:
  using StateId = std::int32_t;
  static constexpr StateId kNone = -1;

  explicit MatchIndex(WordView y, std::size_t alphabet_size = 0) : y_length_(y.size()) {
    require(!y.empty(), ErrorCode::InvalidArgument, "reference sequence must be non-empty");
    require(y.size() < static_cast<std::size_t>(std::numeric_limits<StateId>::max() / 2), ErrorCode::InvalidArgument,
            "reference sequence too long for 32-bit state ids");
    if (alphabet_size == 0) alphabet_size = static_cast<std::size_t>(*std::max_element(y.begin(), y.end())) + 1;
    check_word(y, alphabet_size);
    sigma_ = alphabet_size;
    dense_ = sigma_ <= kDenseAlphabetLimit;

    const std::size_t capacity = 2 * y.size();
    len_.reserve(capacity);
    link_.reserve(capacity);
    min_end_.reserve(capacity);
    if (dense_) dense_next_.reserve(capacity * sigma_);
    add_state(0, kNone, kUnknownEnd);

    StateId last = 0;
    for (std::size_t i = 0; i < y.size(); ++i) last = extend(last, y[i], static_cast<std::uint32_t>(i + 1));
    propagate_min_end();
  }

  std::size_t state_count() const noexcept { return len_.size(); }
  std::size_t y_length() const noexcept { return y_length_; }
  std::size_t alphabet_size() const noexcept { return sigma_; }

  StateId root() const noexcept { return 0; }

  StateId next(StateId s, Symbol a) const {
    if (a >= sigma_) return kNone;
    if (dense_) return dense_next_[static_cast<std::size_t>(s) * sigma_ + a];
    const auto& edges = sparse_next_[static_cast<std::size_t>(s)];
    auto it = std::lower_bound(edges.begin(), edges.end(), a, [](const auto& e, Symbol v) { return e.first < v; });
    return it != edges.end() && it->first == a ? it->second : kNone;
  }

  /// Smallest 1-based end position of the substrings represented by `s`.
  std::uint32_t min_end(StateId s) const { return min_end_[static_cast<std::size_t>(s)]; }

 private:
  static constexpr std::size_t kDenseAlphabetLimit = 16;
  static constexpr std::uint32_t kUnknownEnd = std::numeric_limits<std::uint32_t>::max();

  StateId add_state(std::int32_t len, StateId link, std::uint32_t end) {
    len_.push_back(len);
    link_.push_back(link);
    min_end_.push_back(end);
    if (dense_) dense_next_.insert(dense_next_.end(), sigma_, kNone);
    else sparse_next_.emplace_back();
    return static_cast<StateId>(len_.size() - 1);
  }

  void set_next(StateId s, Symbol a, StateId to) {
    if (dense_) {
      dense_next_[static_cast<std::size_t>(s) * sigma_ + a] = to;
      return;
    }
    auto& edges = sparse_next_[static_cast<std::size_t>(s)];
    auto it = std::lower_bound(edges.begin(), edges.end(), a, [](const auto& e, Symbol v) { return e.first < v; });
    if (it != edges.end() && it->first == a) it->second = to;
    else edges.insert(it, {a, to});
  }

  StateId clone_of(StateId q, std::int32_t len) {
    const StateId c = add_state(len, link_[static_cast<std::size_t>(q)], kUnknownEnd);
    if (dense_) {
      std::copy_n(dense_next_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(q) * sigma_), sigma_,
                  dense_next_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(c) * sigma_));
    } else {
      sparse_next_[static_cast<std::size_t>(c)] = sparse_next_[static_cast<std::size_t>(q)];
    }
    return c;
  }

  StateId extend(StateId last, Symbol a, std::uint32_t end) {
    const StateId cur = add_state(len_[static_cast<std::size_t>(last)] + 1, kNone, end);
    StateId p = last;
    while (p != kNone && next(p, a) == kNone) {
      set_next(p, a, cur);
      p = link_[static_cast<std::size_t>(p)];
    }
    if (p == kNone) {
      link_[static_cast<std::size_t>(cur)] = 0;
      return cur;
    }
    const StateId q = next(p, a);
    if (len_[static_cast<std::size_t>(p)] + 1 == len_[static_cast<std::size_t>(q)]) {
      link_[static_cast<std::size_t>(cur)] = q;
      return cur;
    }
    const StateId c = clone_of(q, len_[static_cast<std::size_t>(p)] + 1);
    while (p != kNone && next(p, a) == q) {
      set_next(p, a, c);
      p = link_[static_cast<std::size_t>(p)];
    }
    link_[static_cast<std::size_t>(q)] = c;
    link_[static_cast<std::size_t>(cur)] = c;
    return cur;
  }

  // Clones own no end position of their own; their occurrence set is the
  // union over their suffix-link subtree, so push minima towards the root in
  // order of decreasing length.
  void propagate_min_end() {
    const std::size_t max_len = y_length_;
    std::vector<std::uint32_t> bucket(max_len + 2, 0);
    for (auto l : len_) ++bucket[static_cast<std::size_t>(l)];
    for (std::size_t i = 1; i < bucket.size(); ++i) bucket[i] += bucket[i - 1];
    std::vector<StateId> order(len_.size());
    for (std::size_t s = len_.size(); s-- > 0;) order[--bucket[static_cast<std::size_t>(len_[s])]] = static_cast<StateId>(s);
    for (std::size_t i = order.size(); i-- > 1;) {
      const auto s = static_cast<std::size_t>(order[i]);
      const auto parent = static_cast<std::size_t>(link_[s]);
      min_end_[parent] = std::min(min_end_[parent], min_end_[s]);
    }
  }

  std::size_t y_length_ = 0;
  std::size_t sigma_ = 0;
  bool dense_ = true;
  std::vector<std::int32_t> len_;
  std::vector<StateId> link_;
  std::vector<std::uint32_t> min_end_;
  std::vector<StateId> dense_next_;
  std::vector<std::vector<std::pair<Symbol, StateId>>> sparse_next_;
};

inline MatchIndex build_match_index(WordView y, std::size_t alphabet_size = 0) { return MatchIndex(y, alphabet_size); }

/// W_l for l = 1..n_max from one walk of x through the index.
inline WaitingProfile waiting_profile(const MatchIndex& index, WordView x, std::size_t n_max) {
  require(n_max <= x.size(), ErrorCode::PatternTooLong,
          "n_max " + std::to_string(n_max) + " exceeds |x| = " + std::to_string(x.size()));
  WaitingProfile out;
  out.y_length = index.y_length();
  out.values.assign(n_max, std::nullopt);
  MatchIndex::StateId s = index.root();
  for (std::size_t ell = 1; ell <= n_max; ++ell) {
    s = index.next(s, x[ell - 1]);
    if (s == MatchIndex::kNone) break;
    out.values[ell - 1] = static_cast<std::uint64_t>(index.min_end(s)) - ell + 1;
  }
  return out;
}

}  // namespace xent
