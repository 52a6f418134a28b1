#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "xent/error.hpp"
#include "xent/matching/profiles.hpp"

namespace xent {

// Paths: one symbol index per whitespace-separated token.

inline void write_path(std::ostream& out, WordView path) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out << ((i % 64) ? ' ' : '\n');
    out << path[i];
  }
  out << '\n';
}

inline Word read_path(std::istream& in) {
  Word out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == token.size() && token[0] != '-', ErrorCode::Io, "bad symbol token '" + token + "'");
    out.push_back(static_cast<Symbol>(v));
  }
  return out;
}

// Profiles: CSV with columns ell_or_m, value, censored_flag.

inline void write_profile_csv(std::ostream& out, const WaitingProfile& p) {
  out << "ell_or_m,value,censored_flag\n";
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    out << (i + 1) << ',' << p.values[i].value_or(0) << ',' << (p.values[i] ? 0 : 1) << '\n';
  }
}

inline void write_profile_csv(std::ostream& out, const MatchProfile& p) {
  out << "ell_or_m,value,censored_flag\n";
  for (const auto& [m, len] : p.entries) out << m << ',' << len << ',' << (len == 0 ? 1 : 0) << '\n';
}

namespace detail {

struct ProfileRow {
  std::uint64_t index, value;
  bool censored;
};

inline std::vector<ProfileRow> read_profile_rows(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line.rfind("ell_or_m,value,censored_flag", 0) == 0,
          ErrorCode::Io, "missing profile CSV header");
  std::vector<ProfileRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    ProfileRow r{};
    char c1 = 0, c2 = 0;
    int flag = 0;
    require(static_cast<bool>(fields >> r.index >> c1 >> r.value >> c2 >> flag) && c1 == ',' && c2 == ',',
            ErrorCode::Io, "bad profile row '" + line + "'");
    r.censored = flag != 0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace detail

inline WaitingProfile read_waiting_profile_csv(std::istream& in, std::uint64_t y_length) {
  WaitingProfile p;
  p.y_length = y_length;
  for (const auto& r : detail::read_profile_rows(in)) {
    require(r.index == p.values.size() + 1, ErrorCode::Io, "waiting profile rows must be l = 1, 2, ...");
    p.values.push_back(r.censored ? std::nullopt : std::optional<std::uint64_t>(r.value));
  }
  return p;
}

inline MatchProfile read_match_profile_csv(std::istream& in) {
  MatchProfile p;
  for (const auto& r : detail::read_profile_rows(in)) p.entries[r.index] = r.value;
  return p;
}

}  // namespace xent
