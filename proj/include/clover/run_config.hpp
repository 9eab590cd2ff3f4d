#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "clover/evaluator.hpp"
#include "clover/pseudo_expert.hpp"
#include "clover/ranking.hpp"
#include "clover/subscores.hpp"

namespace clover::cli {

// Every tunable in one place. The defaults reproduce the documented
// hyperparameter tables; a JSON overlay may override any subset of fields.
struct RunConfig {
  std::uint64_t seed = 1;
  int jobs = 1;
  double kernel_sigma = 2.0;
  std::string score_weights = "deployment";
  eval::EvaluatorConfig evaluator;
  pe::FamilyConfig families;
  ranking::AnchorConfig anchor;
  ranking::Stage1Weights stage1;
  ranking::Stage2Weights stage2;
};

// Maps the preset name to its weight table (pdms_v1, epdms_v2, deployment).
eval::ScoreWeights resolve_score_weights(const std::string& name);

// Applies a partial JSON overlay. Unknown keys raise an error naming the
// offending path so typos never silently fall back to defaults.
void apply_config_overlay(RunConfig& cfg, const nlohmann::json& overlay);

// Loads defaults, then the overlay from explicit_path if non-empty, else from
// $CLOVER_LAB_CONFIG if set, else returns plain defaults.
RunConfig load_run_config(const std::string& explicit_path);

nlohmann::json run_config_to_json(const RunConfig& cfg);

}  // namespace clover::cli
