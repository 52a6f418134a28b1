#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "xent/error.hpp"
#include "xent/models/function_markov.hpp"
#include "xent/models/ladder.hpp"
#include "xent/models/markov_chain.hpp"

namespace xent {

/// Any stationary process family the library can score and sample.
using Model = std::variant<FiniteMarkovChain, FunctionMarkovModel, LadderChain>;

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

inline std::string model_kind(const Model& model) {
  return std::visit(overloaded{[](const FiniteMarkovChain&) { return std::string("markov"); },
                               [](const FunctionMarkovModel&) { return std::string("function_markov"); },
                               [](const LadderChain&) { return std::string("ladder"); }},
                    model);
}

inline const Alphabet& observed_alphabet(const Model& model) {
  return std::visit(overloaded{[](const FiniteMarkovChain& m) -> const Alphabet& { return m.alphabet(); },
                               [](const FunctionMarkovModel& m) -> const Alphabet& { return m.alphabet(); },
                               [](const LadderChain& m) -> const Alphabet& { return m.chain().alphabet(); }},
                    model);
}

/// Markov view of the model when it has one (chains and ladders).
inline const FiniteMarkovChain* as_markov(const Model& model) {
  if (const auto* m = std::get_if<FiniteMarkovChain>(&model)) return m;
  if (const auto* l = std::get_if<LadderChain>(&model)) return &l->chain();
  return nullptr;
}

/// Every model as a function-Markov model (identity map for chains).
inline FunctionMarkovModel as_function_markov(const Model& model) {
  if (const auto* f = std::get_if<FunctionMarkovModel>(&model)) return *f;
  const FiniteMarkovChain& chain = *as_markov(model);
  std::vector<Symbol> id(chain.size());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = static_cast<Symbol>(i);
  return FunctionMarkovModel(chain, std::move(id), chain.alphabet());
}

/// Incremental prefix scorer: log P(w_1..w_k) extended one symbol at a time.
/// Function-Markov prefixes keep a renormalized forward row vector and
/// accumulate the log of the normalizers.
class PrefixScorer {
 public:
  struct State {
    double log_prob = 0.0;
    Symbol last = 0;
    bool empty = true;
    RowVector forward;  // function-Markov only, sums to 1
  };

  explicit PrefixScorer(const Model& model) : model_(&model) {
    if (const auto* f = std::get_if<FunctionMarkovModel>(&model)) fm_ = f;
    else chain_ = as_markov(model);
    size_ = observed_alphabet(model).size();
  }

  State initial() const {
    State s;
    if (fm_) s.forward = fm_->hidden().stationary().transpose();
    return s;
  }

  void extend(const State& from, Symbol a, State& to) const {
    if (a >= size_)
      fail(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(a) + " outside alphabet of size " +
                                            std::to_string(size_));
    to.empty = false;
    to.last = a;
    if (from.log_prob == kNegInf) {
      to.log_prob = kNegInf;
      return;
    }
    if (chain_) {
      const double q = from.empty ? chain_->pi(a) : chain_->p(from.last, a);
      to.log_prob = q > 0.0 ? from.log_prob + std::log(q) : kNegInf;
      return;
    }
    to.forward.noalias() = from.forward * fm_->transfer(a);
    const double mass = to.forward.sum();
    if (!(mass > 0.0)) {
      to.log_prob = kNegInf;
      return;
    }
    to.forward /= mass;
    to.log_prob = from.log_prob + std::log(mass);
  }

  State extend(const State& from, Symbol a) const {
    State to;
    extend(from, a, to);
    return to;
  }

  double score(WordView word) const {
    State s = initial();
    for (Symbol a : word) s = extend(s, a);
    return s.log_prob;
  }

  std::size_t alphabet_size() const noexcept { return size_; }

 private:
  const Model* model_;
  const FiniteMarkovChain* chain_ = nullptr;
  const FunctionMarkovModel* fm_ = nullptr;
  std::size_t size_ = 0;
};

/// log P^(n)(word) in nats; -inf exactly when the word has probability zero.
inline double marginal_log_prob(const Model& model, WordView word) {
  require(!word.empty(), ErrorCode::InvalidArgument, "word must be non-empty");
  check_word(word, observed_alphabet(model).size());
  return PrefixScorer(model).score(word);
}

inline constexpr std::uint64_t kDefaultEnumerationBudget = 2'000'000;

/// Throws BudgetExceeded unless base^exponent <= budget.
inline std::uint64_t checked_word_count(std::size_t base, std::size_t exponent, std::uint64_t budget) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (count > budget / std::max<std::size_t>(base, 1)) {
      fail(ErrorCode::BudgetExceeded, std::to_string(base) + "^" + std::to_string(exponent) +
                                          " words exceed the enumeration budget of " + std::to_string(budget));
    }
    count *= base;
  }
  require(count <= budget, ErrorCode::BudgetExceeded, "word count exceeds enumeration budget");
  return count;
}

/// Depth-first walk over all words of length n, calling
/// visit(word, scorer states per model) at the leaves.
template <class Visit>
void for_each_word(std::size_t alphabet_size, std::size_t n, std::span<const PrefixScorer> scorers,
                   Visit&& visit) {
  std::vector<std::vector<PrefixScorer::State>> stack(scorers.size(), std::vector<PrefixScorer::State>(n + 1));
  for (std::size_t k = 0; k < scorers.size(); ++k) stack[k][0] = scorers[k].initial();
  Word word(n, 0);
  std::vector<PrefixScorer::State> leaf(scorers.size());
  // depth = number of fixed symbols; word[depth] is the next symbol to try
  std::size_t depth = 0;
  std::vector<Symbol> next(n + 1, 0);
  while (true) {
    if (depth == n) {
      for (std::size_t k = 0; k < scorers.size(); ++k) leaf[k] = stack[k][n];
      visit(std::as_const(word), std::as_const(leaf));
      if (depth == 0) return;
      --depth;
      continue;
    }
    if (next[depth] == alphabet_size) {
      next[depth] = 0;
      if (depth == 0) return;
      --depth;
      continue;
    }
    const Symbol a = next[depth]++;
    word[depth] = a;
    for (std::size_t k = 0; k < scorers.size(); ++k) scorers[k].extend(stack[k][depth], a, stack[k][depth + 1]);
    ++depth;
  }
}

/// -(1/n) sum_{a in A^n} P_X(a) log P_Y(a) by exhaustive enumeration.
inline double partial_cross_entropy(const Model& x, const Model& y, std::size_t n,
                                    std::uint64_t budget = kDefaultEnumerationBudget) {
  require(n >= 1, ErrorCode::InvalidArgument, "word length must be at least 1");
  const std::size_t size = observed_alphabet(x).size();
  require(size == observed_alphabet(y).size(), ErrorCode::AlphabetMismatch, "models use different alphabets");
  checked_word_count(size, n, budget);
  const PrefixScorer scorers[] = {PrefixScorer(x), PrefixScorer(y)};
  double total = 0.0;
  bool infinite = false;
  for_each_word(size, n, scorers, [&](const Word&, const std::vector<PrefixScorer::State>& s) {
    if (s[0].log_prob == kNegInf) return;
    if (s[1].log_prob == kNegInf) {
      infinite = true;
      return;
    }
    total -= std::exp(s[0].log_prob) * s[1].log_prob;
  });
  return infinite ? kPosInf : total / static_cast<double>(n);
}

}  // namespace xent
