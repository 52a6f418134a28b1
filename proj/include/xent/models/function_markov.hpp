#pragma once

#include <memory>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/models/ladder.hpp"
#include "xent/models/markov_chain.hpp"

namespace xent {

/// Hidden Markov chain observed through a symbol-wise map F. Marginals are
/// products of the transfer matrices M_a with entries P(z, z') [F(z') == a].
class FunctionMarkovModel {
 public:
  FunctionMarkovModel(FiniteMarkovChain hidden, std::vector<Symbol> observation_map, Alphabet observed)
      : hidden_(std::make_shared<const FiniteMarkovChain>(std::move(hidden))),
        map_(std::move(observation_map)),
        observed_(std::move(observed)) {
    require(map_.size() == hidden_->size(), ErrorCode::InvalidModel,
            "observation map has " + std::to_string(map_.size()) + " entries for " +
                std::to_string(hidden_->size()) + " hidden states");
    std::vector<bool> hit(observed_.size(), false);
    for (Symbol a : map_) {
      require(a < observed_.size(), ErrorCode::SymbolOutOfRange,
              "observation map sends a hidden state to symbol " + std::to_string(a));
      hit[a] = true;
    }
    for (std::size_t a = 0; a < hit.size(); ++a)
      require(hit[a], ErrorCode::NotSurjective, "no hidden state maps to observed symbol " + std::to_string(a));

    const auto n = static_cast<Eigen::Index>(hidden_->size());
    transfer_.assign(observed_.size(), Matrix::Zero(n, n));
    const Matrix& p = hidden_->transitions();
    for (Eigen::Index z = 0; z < n; ++z)
      for (Eigen::Index w = 0; w < n; ++w) transfer_[map_[static_cast<std::size_t>(w)]](z, w) = p(z, w);
  }

  const FiniteMarkovChain& hidden() const noexcept { return *hidden_; }
  const std::vector<Symbol>& observation_map() const noexcept { return map_; }
  const Alphabet& alphabet() const noexcept { return observed_; }
  std::size_t size() const noexcept { return observed_.size(); }
  std::size_t hidden_size() const noexcept { return hidden_->size(); }
  const Matrix& transfer(Symbol a) const { return transfer_.at(a); }
  const std::vector<Matrix>& transfers() const noexcept { return transfer_; }

 private:
  std::shared_ptr<const FiniteMarkovChain> hidden_;
  std::vector<Symbol> map_;
  Alphabet observed_;
  std::vector<Matrix> transfer_;
};

/// Observe `hidden` through `observation_map`; the observed alphabet has
/// max(map)+1 symbols and the map must hit all of them.
inline FunctionMarkovModel lump(const FiniteMarkovChain& hidden, std::vector<Symbol> observation_map,
                                std::optional<Alphabet> observed = std::nullopt) {
  require(!observation_map.empty(), ErrorCode::InvalidModel, "observation map is empty");
  if (!observed) {
    Symbol top = 0;
    for (Symbol a : observation_map) top = std::max(top, a);
    observed = Alphabet(static_cast<std::size_t>(top) + 1);
  }
  return FunctionMarkovModel(hidden, std::move(observation_map), std::move(*observed));
}

inline FunctionMarkovModel lump(const LadderChain& hidden, std::vector<Symbol> observation_map,
                                std::optional<Alphabet> observed = std::nullopt) {
  return lump(hidden.chain(), std::move(observation_map), std::move(observed));
}

/// The binary map j > 0 -> 1, j <= 0 -> 0 on ladder states.
inline std::vector<Symbol> ladder_sign_map(const LadderChain& ladder) {
  std::vector<Symbol> map(ladder.size());
  for (std::size_t s = 0; s < map.size(); ++s) map[s] = ladder.state_of(static_cast<Symbol>(s)) > 0 ? 1 : 0;
  return map;
}

}  // namespace xent
