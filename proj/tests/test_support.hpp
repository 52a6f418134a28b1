#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xent/xent.hpp"

namespace xent::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(XENT_FIXTURE_DIR) / name;
}

inline Model load_fixture(const std::string& name) { return load_model(fixture(name)); }

inline FiniteMarkovChain chain_of(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix p(n, n);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) p(i, j++) = v;
    ++i;
  }
  return FiniteMarkovChain(p);
}

inline FiniteMarkovChain iid_chain(const std::vector<double>& probs) {
  const auto n = static_cast<Eigen::Index>(probs.size());
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) p(i, j) = probs[static_cast<std::size_t>(j)];
  return FiniteMarkovChain(p);
}

// Hand-rolled generators for property tests. They use std::mt19937_64 so the
// test inputs do not depend on the library's own generator.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Word word(std::size_t length, std::size_t alphabet) {
    Word w(length);
    for (auto& s : w) s = static_cast<Symbol>(size(0, alphabet - 1));
    return w;
  }

  /// Random transition matrix; with `sparse`, roughly a third of the entries
  /// are zeroed (a cyclic successor is always kept so the chain is irreducible).
  Matrix stochastic(std::size_t n, bool sparse = false) {
    const auto k = static_cast<Eigen::Index>(n);
    Matrix p(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        const bool keep = !sparse || j == (i + 1) % k || coin(0.65);
        p(i, j) = keep ? real(0.05, 1.0) : 0.0;
      }
      p.row(i) /= p.row(i).sum();
    }
    return p;
  }

  FiniteMarkovChain chain(std::size_t n, bool sparse = false) { return FiniteMarkovChain(stochastic(n, sparse)); }

  /// Function of a random hidden chain; every observed symbol is hit.
  FunctionMarkovModel hidden_model(std::size_t hidden, std::size_t observed, bool sparse = false) {
    std::vector<Symbol> map(hidden);
    for (std::size_t z = 0; z < hidden; ++z) map[z] = static_cast<Symbol>(z < observed ? z : size(0, observed - 1));
    std::shuffle(map.begin(), map.end(), rng_);
    return lump(chain(hidden, sparse), map);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Brute-force word probability of a function-Markov model: a sum over all
/// hidden paths, independent of the transfer-matrix code.
inline double hidden_path_prob(const FunctionMarkovModel& m, const Word& w) {
  const std::size_t h = m.hidden_size();
  const auto& f = m.observation_map();
  const Matrix& p = m.hidden().transitions();
  double total = 0.0;
  std::vector<std::size_t> path(w.size(), 0);
  // odometer over h^|w| hidden paths
  while (true) {
    bool ok = true;
    for (std::size_t i = 0; i < w.size() && ok; ++i) ok = f[path[i]] == w[i];
    if (ok) {
      double prob = m.hidden().stationary()(static_cast<Eigen::Index>(path[0]));
      for (std::size_t i = 1; i < w.size(); ++i)
        prob *= p(static_cast<Eigen::Index>(path[i - 1]), static_cast<Eigen::Index>(path[i]));
      total += prob;
    }
    std::size_t k = 0;
    while (k < path.size() && ++path[k] == h) path[k++] = 0;
    if (k == path.size()) break;
  }
  return total;
}

/// Direct Markov word probability pi(w_1) prod P(w_i, w_{i+1}).
inline double markov_word_prob(const FiniteMarkovChain& c, const Word& w) {
  double prob = c.pi(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) prob *= c.p(w[i - 1], w[i]);
  return prob;
}

/// Every word of length n over an alphabet of size k, in lexicographic order.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out;
  Word w(n, 0);
  while (true) {
    out.push_back(w);
    std::size_t i = n;
    while (i > 0 && ++w[i - 1] == k) w[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Smallest ell with a hidden path emitting a, then ell free symbols, then b.
/// Depth-first over hidden paths, independent of the support-set code.
inline std::optional<std::size_t> brute_force_gap(const FunctionMarkovModel& fm, const Word& a, const Word& b,
                                                  std::size_t budget) {
  const std::size_t h = fm.hidden_size();
  const auto& f = fm.observation_map();
  const Matrix& p = fm.hidden().transitions();
  for (std::size_t ell = 0; ell <= budget; ++ell) {
    const std::size_t total = a.size() + ell + b.size();
    auto wanted = [&](std::size_t pos) -> std::optional<Symbol> {
      if (pos < a.size()) return a[pos];
      if (pos >= a.size() + ell) return b[pos - a.size() - ell];
      return std::nullopt;
    };
    // dead[pos][z]: no completion from hidden state z at position pos
    std::vector<std::vector<char>> dead(total, std::vector<char>(h, 0));
    std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t pos, std::size_t z) {
      if (pos + 1 == total) return true;
      if (dead[pos][z]) return false;
      for (std::size_t w = 0; w < h; ++w) {
        if (p(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(w)) <= 0.0) continue;
        const auto need = wanted(pos + 1);
        if (need && f[w] != *need) continue;
        if (dfs(pos + 1, w)) return true;
      }
      dead[pos][z] = 1;
      return false;
    };
    for (std::size_t z = 0; z < h; ++z)
      if (f[z] == a[0] && dfs(0, z)) return ell;
  }
  return std::nullopt;
}

}  // namespace xent::testing
