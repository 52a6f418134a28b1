#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/types.hpp"

namespace xent {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kStationarityTolerance = 1e-10;

/// Throws NonStochastic unless `p` is square with entries in [0,1] and unit row sums.
inline void check_stochastic(const Matrix& p, double tol = kRowSumTolerance) {
  require(p.rows() == p.cols() && p.rows() >= 1, ErrorCode::NonStochastic,
          "transition matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double v = p(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        fail(ErrorCode::NonStochastic, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") = " + std::to_string(v) + " outside [0,1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      fail(ErrorCode::NonStochastic,
           "row " + std::to_string(i) + " sums to " + std::to_string(sum) + " instead of 1");
    }
  }
}

/// Recurrence structure of the support graph of a transition matrix.
struct ChainStructure {
  std::size_t components = 0;     // strongly connected components
  std::size_t closed_classes = 0; // components with no exit
  bool irreducible = false;
  std::size_t period = 0;         // only meaningful when irreducible
};

namespace detail {

inline std::vector<std::vector<std::size_t>> support_adjacency(const Matrix& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) adj[i].push_back(j);
  return adj;
}

// Iterative Tarjan; returns the component id of every vertex.
inline std::vector<std::size_t> strong_components(const std::vector<std::vector<std::size_t>>& adj,
                                                  std::size_t& count) {
  const std::size_t n = adj.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
  std::size_t counter = 0;
  count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < adj[v].size()) {
        const std::size_t w = adj[v][e++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  return comp;
}

}  // namespace detail

inline ChainStructure analyze_structure(const Matrix& p) {
  const auto adj = detail::support_adjacency(p);
  ChainStructure out;
  const auto comp = detail::strong_components(adj, out.components);
  std::vector<bool> has_exit(out.components, false);
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (std::size_t w : adj[v])
      if (comp[v] != comp[w]) has_exit[comp[v]] = true;
  for (bool e : has_exit) out.closed_classes += e ? 0 : 1;
  out.irreducible = out.components == 1;
  if (out.irreducible) {
    // gcd of level[u] + 1 - level[v] over all edges of a BFS layering.
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> level(adj.size(), kUnset);
    std::queue<std::size_t> queue;
    level[0] = 0;
    queue.push(0);
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop();
      for (std::size_t w : adj[v])
        if (level[w] == kUnset) {
          level[w] = level[v] + 1;
          queue.push(w);
        }
    }
    long long g = 0;
    for (std::size_t v = 0; v < adj.size(); ++v)
      for (std::size_t w : adj[v]) {
        const long long d = static_cast<long long>(level[v]) + 1 - static_cast<long long>(level[w]);
        g = std::gcd(g, d < 0 ? -d : d);
      }
    out.period = static_cast<std::size_t>(g);
  }
  return out;
}

/// Stationary vector of an irreducible stochastic matrix.
///
/// Solved directly by Grassmann-Taksar-Heyman elimination, which involves no
/// subtractions and therefore keeps relative accuracy on very small entries
/// (ladder tails). Periodic chains are fine; no iteration is involved.
inline Vector stationary_distribution(const Matrix& p) {
  check_stochastic(p);
  const ChainStructure s = analyze_structure(p);
  if (s.closed_classes > 1) {
    fail(ErrorCode::NonUniqueStationary,
         std::to_string(s.closed_classes) + " closed classes; stationary vector is not unique");
  }
  if (!s.irreducible) {
    fail(ErrorCode::Reducible, "chain has transient states; stationary vector has zero entries");
  }
  const Eigen::Index n = p.rows();
  Matrix a = p;
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const double exit = a.row(k).head(k).sum();
    require(exit > 0.0, ErrorCode::NonUniqueStationary, "elimination hit an absorbing censored state");
    a.col(k).head(k) /= exit;
    a.topLeftCorner(k, k).noalias() += a.col(k).head(k) * a.row(k).head(k);
  }
  Vector pi(n);
  pi(0) = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) pi(k) = pi.head(k).dot(a.col(k).head(k));
  pi /= pi.sum();
  return pi;
}

/// Stationary finite-state Markov chain (transition matrix plus invariant law).
class FiniteMarkovChain {
 public:
  FiniteMarkovChain(Matrix transitions, Alphabet alphabet)
      : alphabet_(std::move(alphabet)), transitions_(std::move(transitions)) {
    require(static_cast<std::size_t>(transitions_.rows()) == alphabet_.size(), ErrorCode::InvalidModel,
            "transition matrix dimension does not match alphabet size");
    stationary_ = stationary_distribution(transitions_);
    validate_stationary();
  }

  explicit FiniteMarkovChain(Matrix transitions)
      : FiniteMarkovChain(transitions, Alphabet(static_cast<std::size_t>(transitions.rows()))) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return alphabet_.size(); }
  const Matrix& transitions() const noexcept { return transitions_; }
  const Vector& stationary() const noexcept { return stationary_; }
  double p(Symbol a, Symbol b) const { return transitions_(a, b); }
  double pi(Symbol a) const { return stationary_(a); }

  ChainStructure structure() const { return analyze_structure(transitions_); }

 private:
  void validate_stationary() const {
    const RowVector moved = stationary_.transpose() * transitions_;
    for (Eigen::Index i = 0; i < stationary_.size(); ++i) {
      require(std::abs(moved(i) - stationary_(i)) <= kStationarityTolerance, ErrorCode::InvalidModel,
              "stationary vector fails balance at state " + std::to_string(i));
      require(stationary_(i) > 0.0, ErrorCode::InvalidModel,
              "stationary probability of state " + std::to_string(i) + " is not positive");
    }
    require(std::abs(stationary_.sum() - 1.0) <= kRowSumTolerance, ErrorCode::InvalidModel,
            "stationary vector does not sum to 1");
  }

  Alphabet alphabet_;
  Matrix transitions_;
  Vector stationary_;
};

/// -sum_a pi^X_a sum_b P^X_ab log P^Y_ab, or +inf when X charges a transition Y forbids.
inline double cross_entropy_rate(const FiniteMarkovChain& x, const FiniteMarkovChain& y) {
  require(x.size() == y.size(), ErrorCode::AlphabetMismatch,
          "alphabet sizes " + std::to_string(x.size()) + " and " + std::to_string(y.size()) + " differ");
  double h = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) {
      const double w = x.pi(static_cast<Symbol>(a)) * x.p(static_cast<Symbol>(a), static_cast<Symbol>(b));
      if (w == 0.0) continue;
      const double q = y.p(static_cast<Symbol>(a), static_cast<Symbol>(b));
      if (q == 0.0) return kPosInf;
      h -= w * std::log(q);
    }
  }
  return h;
}

inline double entropy_rate(const FiniteMarkovChain& chain) { return cross_entropy_rate(chain, chain); }

}  // namespace xent
