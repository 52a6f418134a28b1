#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/models/model.hpp"
#include "xent/rng.hpp"

namespace xent {

/// Finite prefix of a realization of a model.
struct SamplePath {
  Word symbols;
  std::string model_id;
  std::uint64_t seed = 0;
  bool truncation_hit = false;  // ladder walks only

  std::size_t length() const noexcept { return symbols.size(); }
};

enum class BreachPolicy { Record, Throw };

/// Streams symbols of a stationary path one at a time. The hidden state starts
/// from the stationary law and moves by row-wise inverse CDF; function-Markov
/// models emit F(hidden state). Any prefix of the stream is identical to the
/// path sample_path() returns for the same seed.
class PathSampler {
 public:
  PathSampler(const Model& model, std::uint64_t seed, BreachPolicy policy = BreachPolicy::Record)
      : rng_(seed), policy_(policy) {
    const FiniteMarkovChain* chain = as_markov(model);
    if (const auto* f = std::get_if<FunctionMarkovModel>(&model)) {
      chain = &f->hidden();
      map_ = f->observation_map();
    }
    if (const auto* l = std::get_if<LadderChain>(&model)) top_state_ = l->symbol_of(l->truncation().plus);

    const auto n = chain->size();
    initial_cdf_.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += chain->pi(static_cast<Symbol>(i));
      initial_cdf_[i] = acc;
    }
    rows_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Row& row = rows_[i];
      acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double q = chain->p(static_cast<Symbol>(i), static_cast<Symbol>(j));
        if (q <= 0.0) continue;
        acc += q;
        row.cdf.push_back(acc);
        row.target.push_back(static_cast<Symbol>(j));
      }
    }
  }

  Symbol next() {
    const double u = rng_.uniform();
    if (!started_) {
      started_ = true;
      auto it = std::upper_bound(initial_cdf_.begin(), initial_cdf_.end(), u);
      std::size_t k = static_cast<std::size_t>(it - initial_cdf_.begin());
      if (k >= initial_cdf_.size()) k = last_positive_initial();
      state_ = static_cast<Symbol>(k);
    } else {
      const Row& row = rows_[state_];
      std::size_t k = 0;
      while (k + 1 < row.cdf.size() && row.cdf[k] <= u) ++k;
      const Symbol to = row.target[k];
      if (top_state_ && state_ == *top_state_ && to == *top_state_) {
        truncation_hit_ = true;
        if (policy_ == BreachPolicy::Throw)
          fail(ErrorCode::TruncationBreach, "ladder walk tried to leave the truncated range");
      }
      state_ = to;
    }
    return map_.empty() ? state_ : map_[state_];
  }

  void fill(Word& out, std::size_t count) {
    out.reserve(out.size() + count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  }

  bool truncation_hit() const noexcept { return truncation_hit_; }

 private:
  struct Row {
    std::vector<double> cdf;
    std::vector<Symbol> target;
  };

  std::size_t last_positive_initial() const {
    std::size_t k = initial_cdf_.size() - 1;
    while (k > 0 && initial_cdf_[k] == initial_cdf_[k - 1]) --k;
    return k;
  }

  SplitMix64 rng_;
  BreachPolicy policy_;
  std::vector<double> initial_cdf_;
  std::vector<Row> rows_;
  std::vector<Symbol> map_;
  std::optional<Symbol> top_state_;
  Symbol state_ = 0;
  bool started_ = false;
  bool truncation_hit_ = false;
};

inline SamplePath sample_path(const Model& model, std::size_t length, std::uint64_t seed,
                              std::string model_id = {}, BreachPolicy policy = BreachPolicy::Record) {
  require(length >= 1, ErrorCode::InvalidArgument, "path length must be at least 1");
  PathSampler sampler(model, seed, policy);
  SamplePath path;
  path.model_id = model_id.empty() ? model_kind(model) : std::move(model_id);
  path.seed = seed;
  sampler.fill(path.symbols, length);
  path.truncation_hit = sampler.truncation_hit();
  return path;
}

}  // namespace xent
