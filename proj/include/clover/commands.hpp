#pragma once

#include <optional>
#include <string>

#include "clover/run_config.hpp"

namespace clover::cli {

// Anchor flags for the rank command; absent lambdas fall back to the config.
struct RankOptions {
  std::string pool;
  std::string scenes;
  std::string scorer = "oracle";
  std::string anchor_traj;
  std::optional<double> lambda_s;
  std::optional<double> lambda_xy;
  std::optional<double> lambda_psi;
  std::string out_prefix = "rank_report";
};

struct SimulateOptions {
  std::string check = "enrichment";
  int trials = 1000;
  int rounds = 10;
  std::string out;
};

int cmd_gen_pseudo_experts(const RunConfig& cfg, const std::string& scenes,
                           const std::string& out_dir);
int cmd_score(const RunConfig& cfg, const std::string& scenes, const std::string& pool,
              const std::string& out, const std::string& cache);
int cmd_rank(const RunConfig& cfg, const RankOptions& opt);
int cmd_distill_targets(const RunConfig& cfg, const std::string& pool, int k, int pareto_max,
                        int pareto_min, const std::string& out);
int cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt);
int cmd_analyze(const RunConfig& cfg, const std::string& pools_dir, const std::string& out_csv);
int cmd_sweep_anchor(const RunConfig& cfg, const std::string& pools, const std::string& scenes,
                     const std::string& out_csv);
int cmd_demo(const RunConfig& cfg, const std::string& out_dir);

}  // namespace clover::cli
