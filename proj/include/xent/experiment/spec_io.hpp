#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "xent/estimation/monte_carlo.hpp"
#include "xent/models/model_io.hpp"

namespace xent {

namespace detail {

// A model reference is either an inline model object or a path to a model
// file, resolved against the directory of the spec.
inline std::shared_ptr<const Model> model_ref(const Json& j, const std::filesystem::path& base, std::string& id) {
  if (j.is_string()) {
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative()) p = base / p;
    id = p.stem().string();
    return std::make_shared<const Model>(load_model(p));
  }
  return std::make_shared<const Model>(model_from_json(j));
}

}  // namespace detail

/// Parses an experiment document:
///   {"estimator": "wait"|"match"|"statistic", "model_x": <model|path>,
///    "model_y": <model|path>, "n_grid"|"m_grid": [...], "trials": t, "seed": s,
///    "output": "file.csv", "output_dir"?, "plot"?, "log_base"?, "reference_cap"?, "jobs"?}
inline ExperimentSpec spec_from_json(const Json& j, const std::filesystem::path& base = ".") {
  try {
    require(j.is_object(), ErrorCode::InvalidSpec, "experiment spec must be a JSON object");
    ExperimentSpec spec;
    spec.estimator = estimator_from_string(j.at("estimator").get<std::string>());
    spec.model_x = detail::model_ref(j.at("model_x"), base, spec.model_x_id);
    spec.model_y = detail::model_ref(j.at("model_y"), base, spec.model_y_id);
    const char* grid_key = spec.estimator == Estimator::Match ? "m_grid" : "n_grid";
    require(j.contains(grid_key), ErrorCode::InvalidSpec, std::string("missing ") + grid_key);
    spec.grid = j.at(grid_key).get<std::vector<std::uint64_t>>();
    spec.trials = j.at("trials").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.output = j.value("output", std::string());
    spec.output_dir = j.value("output_dir", std::string("."));
    spec.plot = j.value("plot", false);
    const std::string base_name = j.value("log_base", std::string("nats"));
    require(base_name == "nats" || base_name == "bits", ErrorCode::InvalidSpec, "log_base must be nats or bits");
    spec.log_base = base_name == "bits" ? LogBase::Bits : LogBase::Nats;
    spec.reference_cap = j.value("reference_cap", kDefaultReferenceCap);
    spec.jobs = j.value("jobs", 0u);
    validate(spec);
    return spec;
  } catch (const Json::exception& e) {
    fail(ErrorCode::InvalidSpec, e.what());
  }
}

inline ExperimentSpec load_spec(const std::filesystem::path& path) {
  return spec_from_json(read_json_file(path), path.parent_path());
}

}  // namespace xent
