#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "xent/error.hpp"
#include "xent/models/model.hpp"

namespace xent {

using Json = nlohmann::json;

namespace detail {

inline Alphabet alphabet_from_json(const Json& j, std::size_t fallback_size) {
  if (j.is_null()) return Alphabet(fallback_size);
  if (j.is_number_integer()) return Alphabet(j.get<std::size_t>());
  if (j.is_array()) return Alphabet(j.size(), j.get<std::vector<std::string>>());
  if (j.is_object()) {
    const auto size = j.value("size", fallback_size);
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
    return Alphabet(size, std::move(labels));
  }
  fail(ErrorCode::InvalidModel, "alphabet must be a size, a label list, or {size, labels}");
}

inline Json alphabet_to_json(const Alphabet& a) {
  Json j = {{"size", a.size()}};
  if (a.has_labels()) j["labels"] = a.labels();
  return j;
}

inline Matrix matrix_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::InvalidModel, "transitions must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == n, ErrorCode::InvalidModel,
            "transition row " + std::to_string(i) + " must have " + std::to_string(n) + " entries");
    for (Eigen::Index k = 0; k < n; ++k) {
      const Json& v = row.at(static_cast<std::size_t>(k));
      require(v.is_number(), ErrorCode::InvalidModel, "transition entries must be numbers");
      p(i, k) = v.get<double>();
    }
  }
  return p;
}

inline Json matrix_to_json(const Matrix& p) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < p.cols(); ++k) row.push_back(p(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Ramp ramp_from_json(const Json& j) {
  if (j.is_string()) {
    require(j.get<std::string>() == "identity", ErrorCode::InvalidModel, "string ramp must be \"identity\"");
    return Ramp::identity();
  }
  const std::string kind = j.value("kind", std::string("identity"));
  if (kind == "identity") return Ramp::identity();
  if (kind == "affine") return Ramp::affine(j.at("r").get<std::int64_t>());
  if (kind == "table") return Ramp::table(j.at("values").get<std::vector<std::int64_t>>());
  fail(ErrorCode::InvalidModel, "unknown ramp kind '" + kind + "'");
}

inline Json ramp_to_json(const Ramp& r) {
  switch (r.kind()) {
    case Ramp::Kind::Identity: return {{"kind", "identity"}};
    case Ramp::Kind::Affine: return {{"kind", "affine"}, {"r", r.slope()}};
    case Ramp::Kind::Table: return {{"kind", "table"}, {"values", r.values()}};
  }
  return {};
}

inline LadderChain ladder_from_json(const Json& j) {
  const Ramp ramp = ramp_from_json(j.contains("ramp") ? j.at("ramp") : Json("identity"));
  const Json& t = j.at("truncation");
  Truncation trunc;
  if (t.is_array()) {
    require(t.size() == 2, ErrorCode::InvalidModel, "truncation array must be [minus, plus]");
    trunc.minus = t.at(0).get<std::int64_t>();
    trunc.plus = t.at(1).get<std::int64_t>();
  } else {
    trunc.plus = t.at("plus").get<std::int64_t>();
    trunc.minus = t.contains("minus") ? t.at("minus").get<std::int64_t>() : ramp(trunc.plus);
  }
  return build_ladder_chain(j.at("gamma").get<double>(), ramp, trunc,
                            j.value("tolerance", kDefaultTailTolerance));
}

inline FiniteMarkovChain hidden_from_json(const Json& j) {
  if (j.is_array()) return FiniteMarkovChain(matrix_from_json(j));
  const std::string type = j.value("type", std::string("markov"));
  if (type == "ladder") return ladder_from_json(j).chain();
  require(type == "markov", ErrorCode::InvalidModel, "hidden chain must be of type markov or ladder");
  Matrix p = matrix_from_json(j.at("transitions"));
  const auto n = static_cast<std::size_t>(p.rows());
  return FiniteMarkovChain(std::move(p), alphabet_from_json(j.value("alphabet", Json()), n));
}

}  // namespace detail

/// Parses and validates a model document:
///   {"type": "markov", "alphabet": ..., "transitions": [[...], ...]}
///   {"type": "function_markov", "alphabet": ..., "hidden": <markov|ladder|matrix>, "map": [...]}
///   {"type": "ladder", "gamma": g, "ramp": {...}, "truncation": {"minus": m, "plus": p}}
inline Model model_from_json(const Json& j) {
  try {
    require(j.is_object(), ErrorCode::InvalidModel, "model document must be a JSON object");
    const std::string type = j.at("type").get<std::string>();
    if (type == "markov") {
      Matrix p = detail::matrix_from_json(j.at("transitions"));
      const auto n = static_cast<std::size_t>(p.rows());
      return FiniteMarkovChain(std::move(p), detail::alphabet_from_json(j.value("alphabet", Json()), n));
    }
    if (type == "function_markov") {
      FiniteMarkovChain hidden = detail::hidden_from_json(j.at("hidden"));
      auto map = j.at("map").get<std::vector<Symbol>>();
      std::optional<Alphabet> observed;
      if (j.contains("alphabet")) {
        Symbol top = 0;
        for (Symbol a : map) top = std::max(top, a);
        observed = detail::alphabet_from_json(j.at("alphabet"), static_cast<std::size_t>(top) + 1);
      }
      return lump(hidden, std::move(map), std::move(observed));
    }
    if (type == "ladder") return detail::ladder_from_json(j);
    fail(ErrorCode::InvalidModel, "unknown model type '" + type + "'");
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidModel, e.what());
  }
}

inline Json model_to_json(const Model& model) {
  return std::visit(
      overloaded{
          [](const FiniteMarkovChain& m) -> Json {
            return {{"type", "markov"},
                    {"alphabet", detail::alphabet_to_json(m.alphabet())},
                    {"transitions", detail::matrix_to_json(m.transitions())}};
          },
          [](const FunctionMarkovModel& m) -> Json {
            return {{"type", "function_markov"},
                    {"alphabet", detail::alphabet_to_json(m.alphabet())},
                    {"hidden", {{"type", "markov"}, {"transitions", detail::matrix_to_json(m.hidden().transitions())}}},
                    {"map", m.observation_map()}};
          },
          [](const LadderChain& m) -> Json {
            return {{"type", "ladder"},
                    {"gamma", m.gamma()},
                    {"ramp", detail::ramp_to_json(m.ramp())},
                    {"truncation", {{"minus", m.truncation().minus}, {"plus", m.truncation().plus}}},
                    {"tolerance", m.tolerance()}};
          }},
      model);
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    fail(ErrorCode::Io, path.string() + ": " + e.what());
  }
}

inline Model load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

}  // namespace xent
