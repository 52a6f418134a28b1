#pragma once

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "xent/audit/decoupling.hpp"

namespace xent {

namespace detail {

inline nlohmann::json word_json(const Word& w) { return nlohmann::json(w); }

inline nlohmann::json pair_json(const WordPair& p) { return {{"a", word_json(p.a)}, {"b", word_json(p.b)}}; }

// JSON has no infinity; unbounded constants are written as the string "inf".
inline nlohmann::json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline std::string word_text(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + std::to_string(w[i]);
  return "(" + s + ")";
}

}  // namespace detail

inline nlohmann::json report_to_json(const DecouplingReport& r) {
  nlohmann::json j;
  j["condition"] = to_string(r.condition);
  j["n_range"] = {r.n_range.first, r.n_range.second};
  j["m_range"] = {r.m_range.first, r.m_range.second};
  if (r.condition == Condition::SLD || r.condition == Condition::ILD) j["tau_budget"] = r.tau_budget;
  if (r.slack_k) j["K"] = *r.slack_k;
  if (r.bound) j["bound"] = *r.bound;
  j["per_n"] = nlohmann::json::array();
  for (const auto& row : r.per_n) {
    nlohmann::json e{{"n", row.n}, {"constant", detail::number_json(row.constant)}};
    if (r.condition == Condition::SLD || r.condition == Condition::ILD) {
      e["c_prime"] = detail::number_json(row.c_prime);
      e["tau"] = row.tau;
    }
    if (row.worst_pair) e["worst_pair"] = detail::pair_json(*row.worst_pair);
    j["per_n"].push_back(std::move(e));
  }
  j["worst_pair"] = r.worst_pair ? detail::pair_json(*r.worst_pair) : nlohmann::json(nullptr);
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations) j["violations"].push_back(detail::pair_json(v));
  j["violation_count"] = r.violation_count;
  j["certified"] = r.certified();
  return j;
}

/// Fixed-width table for terminals.
inline void write_report_table(std::ostream& out, const DecouplingReport& r) {
  const bool gapped = r.condition == Condition::SLD || r.condition == Condition::ILD;
  const char* index = r.condition == Condition::PSI ? "ell" : "n";
  out << to_string(r.condition) << " audit";
  if (r.condition != Condition::PSI)
    out << ", n in [" << r.n_range.first << ", " << r.n_range.second << "], m in [" << r.m_range.first << ", "
        << r.m_range.second << "]";
  if (gapped) out << ", tau budget " << r.tau_budget;
  out << '\n';
  if (r.bound) out << "reference bound " << std::setprecision(12) << *r.bound << " nats\n";
  out << std::setw(6) << index << std::setw(20) << "constant";
  if (gapped) out << std::setw(20) << "c_prime" << std::setw(6) << "tau";
  out << "  worst pair\n";
  for (const auto& row : r.per_n) {
    out << std::setw(6) << row.n << std::setw(20) << std::setprecision(12) << row.constant;
    if (gapped) out << std::setw(20) << row.c_prime << std::setw(6) << row.tau;
    if (row.worst_pair) out << "  " << detail::word_text(row.worst_pair->a) << " " << detail::word_text(row.worst_pair->b);
    out << '\n';
  }
  if (r.certified()) {
    out << "certified: no violations\n";
  } else {
    out << "violations: " << r.violation_count << '\n';
    for (const auto& v : r.violations) out << "  a=" << detail::word_text(v.a) << " b=" << detail::word_text(v.b) << '\n';
    if (r.violation_count > r.violations.size())
      out << "  ... " << (r.violation_count - r.violations.size()) << " more\n";
  }
}

}  // namespace xent
