#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/models/markov_chain.hpp"

namespace xent {

/// The reset function h of the ladder chain, restricted to families that can
/// be checked for monotonicity: identity, affine r*(n+1), or a lookup table.
class Ramp {
 public:
  enum class Kind { Identity, Affine, Table };

  static Ramp identity() { return Ramp(Kind::Identity, 1, {}); }
  static Ramp affine(std::int64_t r) {
    require(r >= 1, ErrorCode::InvalidModel, "affine ramp needs r >= 1");
    return Ramp(Kind::Affine, r, {});
  }
  /// values[i-1] = h(i).
  static Ramp table(std::vector<std::int64_t> values) {
    require(!values.empty(), ErrorCode::InvalidModel, "ramp table is empty");
    return Ramp(Kind::Table, 1, std::move(values));
  }

  Kind kind() const noexcept { return kind_; }
  std::int64_t slope() const noexcept { return r_; }
  const std::vector<std::int64_t>& values() const noexcept { return table_; }

  std::int64_t operator()(std::int64_t i) const {
    require(i >= 1, ErrorCode::InvalidArgument, "ramp is defined on positive integers only");
    switch (kind_) {
      case Kind::Identity: return i;
      case Kind::Affine: return r_ * (i + 1);
      case Kind::Table:
        require(static_cast<std::size_t>(i) <= table_.size(), ErrorCode::InvalidModel,
                "ramp table has no entry for " + std::to_string(i));
        return table_[static_cast<std::size_t>(i - 1)];
    }
    return i;
  }

  /// Throws unless h is positive and nondecreasing on [1, upto].
  void check_monotone(std::int64_t upto) const {
    std::int64_t prev = 0;
    for (std::int64_t i = 1; i <= upto; ++i) {
      const std::int64_t v = (*this)(i);
      require(v >= 1, ErrorCode::InvalidModel, "ramp value h(" + std::to_string(i) + ") must be positive");
      require(v >= prev, ErrorCode::InvalidModel, "ramp decreases at " + std::to_string(i));
      prev = v;
    }
  }

  std::string name() const {
    switch (kind_) {
      case Kind::Identity: return "identity";
      case Kind::Affine: return "affine";
      case Kind::Table: return "table";
    }
    return "?";
  }

 private:
  Ramp(Kind kind, std::int64_t r, std::vector<std::int64_t> table)
      : kind_(kind), r_(r), table_(std::move(table)) {}

  Kind kind_;
  std::int64_t r_;
  std::vector<std::int64_t> table_;
};

struct Truncation {
  std::int64_t minus = 0;  // lowest state is -minus
  std::int64_t plus = 1;   // highest state
};

inline constexpr double kDefaultTailTolerance = 1e-6;

/// Ladder chain on the integers truncated to [-minus, plus]: from j <= 0 step
/// to j+1; from j > 0 step to j+1 w.p. gamma or reset to -h(j) w.p. 1-gamma.
/// The upward move out of the top state is reflected onto the top state.
class LadderChain {
 public:
  double gamma() const noexcept { return gamma_; }
  const Ramp& ramp() const noexcept { return ramp_; }
  const Truncation& truncation() const noexcept { return trunc_; }
  const FiniteMarkovChain& chain() const noexcept { return *chain_; }
  double tail_mass_bound() const noexcept { return tail_mass_; }
  double tolerance() const noexcept { return tolerance_; }
  /// Spread of log(pi(j))/log(gamma) - j over j in [0, plus].
  double decay_offset_spread() const noexcept { return decay_spread_; }

  std::size_t size() const noexcept { return chain_->size(); }
  std::int64_t state_of(Symbol s) const noexcept { return static_cast<std::int64_t>(s) - trunc_.minus; }
  Symbol symbol_of(std::int64_t j) const {
    require(j >= -trunc_.minus && j <= trunc_.plus, ErrorCode::SymbolOutOfRange,
            "ladder state " + std::to_string(j) + " outside truncation");
    return static_cast<Symbol>(j + trunc_.minus);
  }
  double pi_state(std::int64_t j) const { return chain_->pi(symbol_of(j)); }

  friend LadderChain build_ladder_chain(double gamma, Ramp ramp, Truncation trunc, double tolerance);

 private:
  LadderChain(double gamma, Ramp ramp, Truncation trunc, double tolerance)
      : gamma_(gamma), ramp_(std::move(ramp)), trunc_(trunc), tolerance_(tolerance) {}

  double gamma_;
  Ramp ramp_;
  Truncation trunc_;
  double tolerance_;
  std::shared_ptr<const FiniteMarkovChain> chain_;
  double tail_mass_ = 0.0;
  double decay_spread_ = 0.0;
};

inline LadderChain build_ladder_chain(double gamma, Ramp ramp, Truncation trunc,
                                      double tolerance = kDefaultTailTolerance) {
  require(gamma > 0.0 && gamma < 0.5, ErrorCode::InvalidModel, "gamma must lie in (0, 1/2)");
  require(trunc.plus >= 1 && trunc.minus >= 0, ErrorCode::InvalidModel, "truncation must include state 1");
  ramp.check_monotone(trunc.plus);
  require(trunc.minus >= ramp(trunc.plus), ErrorCode::InvalidModel,
          "truncation lower bound -" + std::to_string(trunc.minus) + " does not cover reset target -" +
              std::to_string(ramp(trunc.plus)));

  const std::int64_t lo = -trunc.minus;
  const auto n = static_cast<Eigen::Index>(trunc.plus - lo + 1);
  auto idx = [lo](std::int64_t j) { return static_cast<Eigen::Index>(j - lo); };
  Matrix p = Matrix::Zero(n, n);
  for (std::int64_t j = lo; j <= trunc.plus; ++j) {
    if (j <= 0) {
      p(idx(j), idx(j + 1)) = 1.0;
    } else {
      p(idx(j), idx(std::min(j + 1, trunc.plus))) += gamma;
      p(idx(j), idx(-ramp(j))) += 1.0 - gamma;
    }
  }

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = lo; j <= trunc.plus; ++j) labels.push_back(std::to_string(j));

  LadderChain out(gamma, std::move(ramp), trunc, tolerance);
  out.chain_ = std::make_shared<const FiniteMarkovChain>(std::move(p), Alphabet(static_cast<std::size_t>(n), labels));

  // Certified tail: stationary mass in the outermost tenth of each side.
  const Vector& pi = out.chain_->stationary();
  const auto k_hi = std::max<std::int64_t>(1, (trunc.plus + 9) / 10);
  const auto k_lo = std::max<std::int64_t>(1, (trunc.minus + 9) / 10);
  double tail = 0.0;
  for (std::int64_t j = trunc.plus - k_hi + 1; j <= trunc.plus; ++j) tail += pi(idx(j));
  if (trunc.minus > 0)
    for (std::int64_t j = lo; j < lo + k_lo; ++j) tail += pi(idx(j));
  out.tail_mass_ = tail;
  require(tail <= tolerance, ErrorCode::TruncationTooSmall,
          "stationary mass " + std::to_string(tail) + " in the outer states exceeds tolerance " +
              std::to_string(tolerance));

  double lo_off = kPosInf, hi_off = kNegInf;
  for (std::int64_t j = 0; j <= trunc.plus; ++j) {
    const double off = std::log(pi(idx(j))) / std::log(gamma) - static_cast<double>(j);
    lo_off = std::min(lo_off, off);
    hi_off = std::max(hi_off, off);
  }
  out.decay_spread_ = hi_off - lo_off;
  // pi(j) = gamma^(j + O(1)) for j >= 0; a large spread means the solve went wrong.
  require(out.decay_spread_ < 16.0, ErrorCode::InvalidModel, "stationary decay inconsistent with gamma^j");
  return out;
}

}  // namespace xent
