#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xent/error.hpp"
#include "xent/models/model.hpp"

namespace xent {

// ---------------------------------------------------------------------------
// Gapped joint probabilities
// ---------------------------------------------------------------------------

/// log P{y_1^n = a, y_{n+l+1}^{n+l+m} = b} through the transfer matrices:
/// pi M_a P^l M_b 1, renormalizing the forward vector after each factor.
inline double gapped_joint_log_prob(const FunctionMarkovModel& model, WordView a, std::size_t ell, WordView b) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "both words must be non-empty");
  check_word(a, model.size());
  check_word(b, model.size());
  RowVector v = model.hidden().stationary().transpose();
  double log_scale = 0.0;
  auto apply = [&](const Matrix& m) {
    v = v * m;
    const double mass = v.sum();
    if (!(mass > 0.0)) return false;
    v /= mass;
    log_scale += std::log(mass);
    return true;
  };
  for (Symbol s : a)
    if (!apply(model.transfer(s))) return kNegInf;
  for (std::size_t i = 0; i < ell; ++i) v = v * model.hidden().transitions();
  for (Symbol s : b)
    if (!apply(model.transfer(s))) return kNegInf;
  return log_scale;
}

/// Markov closed form: log[P(a) (P^{l+1})_{a_n, b_1} P(b) / pi_{b_1}].
inline double gapped_joint_log_prob(const FiniteMarkovChain& chain, WordView a, std::size_t ell, WordView b) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "both words must be non-empty");
  const Model m = chain;
  const double la = marginal_log_prob(m, a);
  const double lb = marginal_log_prob(m, b);
  if (la == kNegInf || lb == kNegInf) return kNegInf;
  RowVector row = RowVector::Zero(static_cast<Eigen::Index>(chain.size()));
  row(a.back()) = 1.0;
  for (std::size_t i = 0; i <= ell; ++i) row = row * chain.transitions();
  const double bridge = row(b.front());
  if (!(bridge > 0.0)) return kNegInf;
  return la + std::log(bridge) + lb - std::log(chain.pi(b.front()));
}

inline double gapped_joint_log_prob(const Model& model, WordView a, std::size_t ell, WordView b) {
  if (const FiniteMarkovChain* chain = as_markov(model)) return gapped_joint_log_prob(*chain, a, ell, b);
  return gapped_joint_log_prob(std::get<FunctionMarkovModel>(model), a, ell, b);
}

/// Best gap for one pair: the smallest l <= tau_budget maximizing
/// P(a, gap l, b) / (P(a) P(b)), with the log of that ratio.
struct GapChoice {
  double log_ratio = kNegInf;
  std::size_t ell = 0;
};

inline GapChoice best_sld_ratio(const Model& model, WordView a, WordView b, std::size_t tau_budget) {
  const double la = marginal_log_prob(model, a), lb = marginal_log_prob(model, b);
  require(la > kNegInf && lb > kNegInf, ErrorCode::InvalidArgument, "both words need positive probability");
  GapChoice best;
  for (std::size_t ell = 0; ell <= tau_budget; ++ell) {
    const double r = gapped_joint_log_prob(model, a, ell, b) - la - lb;
    if (r > best.log_ratio) best = {r, ell};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class Condition { SLD, ILD, UD, PSI, GAP };

inline std::string to_string(Condition c) {
  switch (c) {
    case Condition::SLD: return "SLD";
    case Condition::ILD: return "ILD";
    case Condition::UD: return "UD";
    case Condition::PSI: return "PSI";
    case Condition::GAP: return "GAP";
  }
  return "?";
}

struct WordPair {
  Word a;
  Word b;
  friend bool operator==(const WordPair&, const WordPair&) = default;
};

/// One audited length (or gap, for PSI).
struct DecouplingRow {
  std::size_t n = 0;
  /// Reported constant in nats: the implied WLD constant c'_n + log(tau_n + 1)
  /// for SLD/ILD, d_n for UD, psi(l) for PSI, the minimal gap for GAP.
  double constant = 0.0;
  double c_prime = 0.0;  // SLD/ILD only: constant of the singleton inequality
  std::size_t tau = 0;   // gap budget actually used
  std::optional<WordPair> worst_pair;
};

struct DecouplingReport {
  Condition condition = Condition::SLD;
  std::pair<std::size_t, std::size_t> n_range{1, 1};
  std::pair<std::size_t, std::size_t> m_range{1, 1};
  std::size_t tau_budget = 0;
  std::optional<double> slack_k;  // K of the e^{-Kn} slack form, when requested
  std::optional<double> bound;    // reference bound (UD)
  std::vector<DecouplingRow> per_n;
  std::optional<WordPair> worst_pair;
  std::vector<WordPair> violations;  // first kMaxStoredViolations only
  std::size_t violation_count = 0;

  bool certified() const noexcept { return violation_count == 0; }
};

inline constexpr std::size_t kMaxStoredViolations = 64;
inline constexpr std::uint64_t kDefaultPairBudget = 4'000'000;

struct AuditOptions {
  std::uint64_t pair_budget = kDefaultPairBudget;
  /// Exempt pairs with P(a) P(b) <= e^{-K n}, for which the slack form of
  /// the lower-decoupling inequality holds trivially.
  std::optional<double> slack_k;
};

namespace detail {

/// All words of one length with positive probability, with their forward
/// (normalized pi M_w) and backward (normalized M_w 1) hidden vectors.
struct WordTable {
  std::vector<Word> words;
  std::vector<double> log_prob;
  std::vector<RowVector> forward;
  std::vector<Vector> backward;  // normalized to unit sum
  std::vector<double> backward_norm;  // pi . backward
};

inline WordTable enumerate_words(const FunctionMarkovModel& fm, std::size_t length) {
  const Model model = fm;
  const PrefixScorer scorer(model);
  WordTable table;
  for_each_word(fm.size(), length, std::span<const PrefixScorer>(&scorer, 1),
                [&](const Word& w, const std::vector<PrefixScorer::State>& s) {
                  if (s[0].log_prob == kNegInf) return;
                  table.words.push_back(w);
                  table.log_prob.push_back(s[0].log_prob);
                  table.forward.push_back(s[0].forward);
                  Vector back = Vector::Ones(static_cast<Eigen::Index>(fm.hidden_size()));
                  for (std::size_t j = w.size(); j-- > 0;) {
                    back = fm.transfer(w[j]) * back;
                    back /= back.sum();
                  }
                  table.backward_norm.push_back(fm.hidden().stationary().dot(back));
                  table.backward.push_back(std::move(back));
                });
  return table;
}

inline void check_pair_budget(std::size_t alphabet, std::size_t n_max, std::size_t m_max, std::uint64_t budget) {
  const std::uint64_t left = checked_word_count(alphabet, n_max, budget);
  const std::uint64_t right = checked_word_count(alphabet, m_max, budget);
  require(left <= budget / std::max<std::uint64_t>(right, 1), ErrorCode::BudgetExceeded,
          "audit would enumerate more than " + std::to_string(budget) + " word pairs");
}

inline void record_violation(DecouplingReport& report, const Word& a, const Word& b) {
  ++report.violation_count;
  if (report.violations.size() < kMaxStoredViolations) report.violations.push_back({a, b});
}

}  // namespace detail

/// Selective lower decoupling on all word pairs with |a| <= n_max, |b| <= m_max.
///
/// For each n the gap budget tau in [0, tau_budget] is chosen to minimize the
/// implied WLD constant c'(tau) + log(tau + 1), where c'(tau) is the largest
/// -log ratio over pairs after each pair picks its best gap l <= tau
/// (smallest l on ties), clamped at 0. A pair whose joint probability
/// vanishes for every l <= tau_budget is a violation.
inline DecouplingReport check_sld(const Model& model, std::size_t n_max, std::size_t m_max, std::size_t tau_budget,
                                  const AuditOptions& options = {}, Condition label = Condition::SLD) {
  require(n_max >= 1 && m_max >= 1, ErrorCode::InvalidArgument, "word lengths must be at least 1");
  const FunctionMarkovModel fm = as_function_markov(model);
  detail::check_pair_budget(fm.size(), n_max, m_max, options.pair_budget);

  DecouplingReport report;
  report.condition = label;
  report.n_range = {1, n_max};
  report.m_range = {1, m_max};
  report.tau_budget = tau_budget;
  report.slack_k = options.slack_k;

  std::vector<detail::WordTable> rights;
  for (std::size_t m = 1; m <= m_max; ++m) rights.push_back(detail::enumerate_words(fm, m));
  const Matrix& p = fm.hidden().transitions();

  double worst_constant = -1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const detail::WordTable left = detail::enumerate_words(fm, n);
    // c'(tau) and its worst pair for every candidate budget
    std::vector<double> c_prime(tau_budget + 1, 0.0);
    std::vector<std::optional<WordPair>> worst(tau_budget + 1);
    const std::size_t violations_before = report.violation_count;

    std::vector<RowVector> shifted(tau_budget + 1);
    for (std::size_t i = 0; i < left.words.size(); ++i) {
      shifted[0] = left.forward[i];
      for (std::size_t l = 1; l <= tau_budget; ++l) shifted[l] = shifted[l - 1] * p;
      for (const auto& right : rights) {
        for (std::size_t j = 0; j < right.words.size(); ++j) {
          if (options.slack_k && left.log_prob[i] + right.log_prob[j] <= -*options.slack_k * static_cast<double>(n))
            continue;
          double best = kNegInf;
          for (std::size_t l = 0; l <= tau_budget; ++l) {
            const double joint = shifted[l].dot(right.backward[j]);
            const double log_ratio = joint > 0.0 ? std::log(joint / right.backward_norm[j]) : kNegInf;
            best = std::max(best, log_ratio);
            if (-best > c_prime[l]) {
              c_prime[l] = -best;
              worst[l] = WordPair{left.words[i], right.words[j]};
            }
          }
          if (best == kNegInf) detail::record_violation(report, left.words[i], right.words[j]);
        }
      }
    }

    DecouplingRow row;
    row.n = n;
    if (report.violation_count > violations_before) {
      row.constant = row.c_prime = kPosInf;
      row.tau = tau_budget;
      row.worst_pair = report.violations[std::min(violations_before, report.violations.size() - 1)];
    } else {
      std::optional<double> best_total;
      for (std::size_t t = 0; t <= tau_budget; ++t) {
        if (c_prime[t] == kPosInf) continue;
        const double total = c_prime[t] + std::log(static_cast<double>(t + 1));
        if (!best_total || total < *best_total) {
          best_total = total;
          row.tau = t;
        }
      }
      row.c_prime = c_prime[row.tau];
      row.constant = *best_total;
      row.worst_pair = worst[row.tau];
    }
    if (row.constant > worst_constant) {
      worst_constant = row.constant;
      report.worst_pair = row.worst_pair;
    }
    report.per_n.push_back(std::move(row));
  }
  return report;
}

/// Immediate (gapless) lower decoupling: check_sld with the gap forced to 0.
inline DecouplingReport check_ild(const Model& model, std::size_t n_max, std::size_t m_max,
                                  const AuditOptions& options = {}) {
  return check_sld(model, n_max, m_max, 0, options, Condition::ILD);
}

/// Reference upper-decoupling constant for finite models: -log min pi for a
/// Markov chain, -2 log min pi_z for a function of a finite chain.
inline double ud_reference_bound(const Model& model) {
  if (const FiniteMarkovChain* chain = as_markov(model)) return -std::log(chain->stationary().minCoeff());
  return -2.0 * std::log(std::get<FunctionMarkovModel>(model).hidden().stationary().minCoeff());
}

/// Upper decoupling with no gap: d_n = max log[P(ab) / (P(a) P(b))] over
/// pairs with P(ab) > 0, clamped at 0. Pairs exceeding the reference bound
/// are reported as violations.
inline DecouplingReport check_ud(const Model& model, std::size_t n_max, std::size_t m_max,
                                 const AuditOptions& options = {}) {
  require(n_max >= 1 && m_max >= 1, ErrorCode::InvalidArgument, "word lengths must be at least 1");
  const FunctionMarkovModel fm = as_function_markov(model);
  detail::check_pair_budget(fm.size(), n_max, m_max, options.pair_budget);
  DecouplingReport report;
  report.condition = Condition::UD;
  report.n_range = {1, n_max};
  report.m_range = {1, m_max};
  report.bound = ud_reference_bound(model);

  std::vector<detail::WordTable> rights;
  for (std::size_t m = 1; m <= m_max; ++m) rights.push_back(detail::enumerate_words(fm, m));
  double worst_constant = -1.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const detail::WordTable left = detail::enumerate_words(fm, n);
    DecouplingRow row;
    row.n = n;
    for (std::size_t i = 0; i < left.words.size(); ++i) {
      for (const auto& right : rights) {
        for (std::size_t j = 0; j < right.words.size(); ++j) {
          const double joint = left.forward[i].dot(right.backward[j]);
          if (!(joint > 0.0)) continue;
          const double d = std::log(joint / right.backward_norm[j]);
          if (d > row.constant) {
            row.constant = d;
            row.worst_pair = WordPair{left.words[i], right.words[j]};
          }
          if (d > *report.bound + 1e-9) detail::record_violation(report, left.words[i], right.words[j]);
        }
      }
    }
    if (row.constant > worst_constant) {
      worst_constant = row.constant;
      report.worst_pair = row.worst_pair;
    }
    report.per_n.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// psi-mixing and minimal gaps
// ---------------------------------------------------------------------------

/// max_{a,b} |(P^l)_{ab} / pi_b - 1|, the transition-ratio form of the psi
/// coefficient of a stationary Markov chain at separation l >= 1.
inline double psi_coefficient(const FiniteMarkovChain& chain, std::size_t ell) {
  require(ell >= 1, ErrorCode::InvalidArgument, "psi is defined for separations l >= 1");
  Matrix power = chain.transitions();
  for (std::size_t i = 1; i < ell; ++i) power = power * chain.transitions();
  double psi = 0.0;
  for (Eigen::Index a = 0; a < power.rows(); ++a)
    for (Eigen::Index b = 0; b < power.cols(); ++b)
      psi = std::max(psi, std::abs(power(a, b) / chain.stationary()(b) - 1.0));
  return psi;
}

inline DecouplingReport psi_report(const FiniteMarkovChain& chain, std::size_t ell_min, std::size_t ell_max) {
  require(ell_min >= 1 && ell_max >= ell_min, ErrorCode::InvalidArgument, "bad separation range");
  DecouplingReport report;
  report.condition = Condition::PSI;
  report.n_range = {ell_min, ell_max};
  report.m_range = {0, 0};
  for (std::size_t l = ell_min; l <= ell_max; ++l) {
    DecouplingRow row;
    row.n = l;
    row.constant = psi_coefficient(chain, l);
    report.per_n.push_back(row);
  }
  return report;
}

/// Smallest l <= gap_budget with P{y_1^n = a, y_{n+l+1}^{n+l+m} = b} > 0,
/// found by boolean reachability on the hidden support graph.
inline std::size_t minimal_positive_gap(const FunctionMarkovModel& model, WordView a, WordView b,
                                        std::size_t gap_budget) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "both words must be non-empty");
  check_word(a, model.size());
  check_word(b, model.size());
  const std::size_t h = model.hidden_size();
  const Matrix& p = model.hidden().transitions();
  const auto& f = model.observation_map();
  std::vector<std::vector<std::size_t>> succ(h), pred(h);
  for (std::size_t z = 0; z < h; ++z)
    for (std::size_t w = 0; w < h; ++w)
      if (p(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(w)) > 0.0) {
        succ[z].push_back(w);
        pred[w].push_back(z);
      }

  // Hidden states that can sit under a_n after emitting a (first symbol at time 1).
  std::vector<char> reach(h, 0), tmp(h, 0);
  for (std::size_t z = 0; z < h; ++z) reach[z] = f[z] == a[0];
  auto step = [&](std::vector<char>& set, std::optional<Symbol> emit) {
    std::fill(tmp.begin(), tmp.end(), 0);
    for (std::size_t z = 0; z < h; ++z)
      if (set[z])
        for (std::size_t w : succ[z])
          if (!emit || f[w] == *emit) tmp[w] = 1;
    set.swap(tmp);
  };
  for (std::size_t i = 1; i < a.size(); ++i) step(reach, a[i]);

  // Hidden states from which the next m symbols can read b.
  std::vector<char> target(h, 0);
  for (std::size_t z = 0; z < h; ++z) target[z] = f[z] == b.back();
  for (std::size_t j = b.size() - 1; j-- > 0;) {
    std::vector<char> prev(h, 0);
    for (std::size_t w = 0; w < h; ++w)
      if (target[w])
        for (std::size_t z : pred[w])
          if (f[z] == b[j]) prev[z] = 1;
    target.swap(prev);
  }
  require(std::find(reach.begin(), reach.end(), 1) != reach.end(), ErrorCode::InvalidArgument, "P(a) = 0");
  require(std::find(target.begin(), target.end(), 1) != target.end(), ErrorCode::InvalidArgument, "P(b) = 0");

  // After the gap the chain must move once more onto b_1.
  for (std::size_t ell = 0; ell <= gap_budget; ++ell) {
    std::vector<char> entry = reach;
    step(entry, std::nullopt);
    for (std::size_t z = 0; z < h; ++z)
      if (entry[z] && target[z]) return ell;
    step(reach, std::nullopt);
  }
  fail(ErrorCode::NoGapFound, "no admissible gap up to " + std::to_string(gap_budget));
}

inline std::size_t minimal_positive_gap(const Model& model, WordView a, WordView b, std::size_t gap_budget) {
  return minimal_positive_gap(as_function_markov(model), a, b, gap_budget);
}

}  // namespace xent
