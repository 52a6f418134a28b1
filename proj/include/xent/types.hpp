#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "xent/error.hpp"

namespace xent {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Finite symbol set {0, ..., size-1} with optional display labels.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::size_t size, std::vector<std::string> labels = {})
      : size_(size), labels_(std::move(labels)) {
    require(size_ >= 1, ErrorCode::InvalidModel, "alphabet size must be at least 1");
    if (!labels_.empty()) {
      require(labels_.size() == size_, ErrorCode::InvalidModel,
              "alphabet has " + std::to_string(size_) + " symbols but " +
                  std::to_string(labels_.size()) + " labels");
      std::set<std::string> seen(labels_.begin(), labels_.end());
      require(seen.size() == labels_.size(), ErrorCode::InvalidModel, "alphabet labels must be distinct");
    }
  }

  std::size_t size() const noexcept { return size_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  std::string label(Symbol s) const {
    return has_labels() && s < size_ ? labels_[s] : std::to_string(s);
  }

  bool contains(Symbol s) const noexcept { return s < size_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_ = 1;
  std::vector<std::string> labels_;
};

inline void check_word(WordView word, std::size_t alphabet_size) {
  for (Symbol s : word) {
    if (s >= alphabet_size) {
      fail(ErrorCode::SymbolOutOfRange,
           "symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(alphabet_size));
    }
  }
}

// x log y with the 0 log 0 = 0 convention.
inline double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(y);
}

}  // namespace xent
