#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "clover/commands.hpp"
#include "clover/run_config.hpp"

namespace {

struct GlobalArgs {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 0;
  bool jobs_set = false;
};

clover::cli::RunConfig resolve_config(const GlobalArgs& g) {
  clover::cli::RunConfig cfg = clover::cli::load_run_config(g.config);
  if (g.seed_set) cfg.seed = g.seed;
  if (g.jobs_set) cfg.jobs = g.jobs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Candidate-trajectory evaluation, generation, ranking, and simulation toolkit"};
  app.require_subcommand(1);
  // Global options stay valid after the subcommand name, e.g.
  // `demo --seed 1 --jobs 8`.
  app.fallthrough();

  GlobalArgs g;
  app.add_option("--config", g.config,
                 "JSON config overlay (default: $CLOVER_LAB_CONFIG if set)");
  app.add_option("--seed", g.seed, "Master seed; every random draw derives from it")
      ->each([&](const std::string&) { g.seed_set = true; });
  app.add_option("--jobs", g.jobs, "Worker threads for batch kernels")
      ->each([&](const std::string&) { g.jobs_set = true; });

  std::string scenes, out, pool, cache, pools;
  clover::cli::RankOptions rank_opt;
  clover::cli::SimulateOptions sim_opt;
  int k = 8, pareto_max = 8, pareto_min = 2;
  double lambda_s = 0.0, lambda_xy = 0.0, lambda_psi = 0.0;

  CLI::App* gen = app.add_subcommand("gen-pseudo-experts",
                                     "Generate, triage, score, and select candidates per scene");
  gen->add_option("--scenes", scenes, "Scene file or directory")->required();
  gen->add_option("--out", out, "Output directory")->required();

  CLI::App* score = app.add_subcommand("score", "Evaluate pool trajectories against scenes");
  score->add_option("--scenes", scenes, "Scene file or directory")->required();
  score->add_option("--pool", pool, "Candidate pool JSONL")->required();
  score->add_option("--out", out, "Scored JSONL output")->required();
  score->add_option("--cache", cache, "Score cache file (read and updated)");

  CLI::App* rank = app.add_subcommand("rank", "Rank a pool with a scorer");
  rank->add_option("--pool", rank_opt.pool, "Candidate pool JSONL")->required();
  rank->add_option("--scenes", rank_opt.scenes, "Scene file or directory")->required();
  rank->add_option("--scorer", rank_opt.scorer,
                   "oracle | noisy:<eps>:<seed> | noisy:<eps>:<p_flip>:<seed> | "
                   "tabular:<file>");
  rank->add_option("--anchor", rank_opt.anchor_traj, "Anchor trajectory JSON for reranking");
  CLI::Option* ls = rank->add_option("--lambda-s", lambda_s, "Anchor scorer weight");
  CLI::Option* lx = rank->add_option("--lambda-xy", lambda_xy, "Anchor position weight");
  CLI::Option* lp = rank->add_option("--lambda-psi", lambda_psi, "Anchor heading weight");
  rank->add_option("--out", rank_opt.out_prefix, "Output prefix (.csv and .json)");

  CLI::App* distill = app.add_subcommand("distill-targets",
                                         "Top-k and Pareto target sets from a scored pool");
  distill->add_option("--pool", pool, "Scored pool JSONL")->required();
  distill->add_option("--k", k, "Top-k size");
  distill->add_option("--pareto-max", pareto_max, "Pareto set clamp upper bound");
  distill->add_option("--pareto-min", pareto_min, "Pareto set clamp lower bound");
  distill->add_option("--out", out, "Target-set JSON output")->required();

  CLI::App* simulate = app.add_subcommand("simulate", "Verify the refinement bounds");
  simulate->add_option("--check", sim_opt.check,
                       "enrichment | expected | multiround | monotone | drift | pareto | "
                       "margin | report");
  simulate->add_option("--trials", sim_opt.trials, "Monte Carlo instance count");
  simulate->add_option("--rounds", sim_opt.rounds, "Rounds per multiround instance");
  simulate->add_option("--out", sim_opt.out, "Result JSON path");

  CLI::App* analyze = app.add_subcommand("analyze", "Pool quality and diversity report");
  analyze->add_option("--pools", pools, "Directory of per-scene pool JSONL files")->required();
  analyze->add_option("--out", out, "Report CSV path (JSON written beside it)")->required();

  CLI::App* sweep = app.add_subcommand("sweep-anchor", "Anchor coefficient grid sweep");
  sweep->add_option("--pools", pools, "Pool JSONL file or directory")->required();
  sweep->add_option("--scenes", scenes, "Scene file or directory")->required();
  sweep->add_option("--out", out, "Sweep table CSV path")->required();

  CLI::App* demo = app.add_subcommand("demo", "Bundled scenes through the full pipeline");
  demo->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const clover::cli::RunConfig cfg = resolve_config(g);
    if (gen->parsed()) return clover::cli::cmd_gen_pseudo_experts(cfg, scenes, out);
    if (score->parsed()) return clover::cli::cmd_score(cfg, scenes, pool, out, cache);
    if (rank->parsed()) {
      if (ls->count() > 0) rank_opt.lambda_s = lambda_s;
      if (lx->count() > 0) rank_opt.lambda_xy = lambda_xy;
      if (lp->count() > 0) rank_opt.lambda_psi = lambda_psi;
      return clover::cli::cmd_rank(cfg, rank_opt);
    }
    if (distill->parsed()) {
      return clover::cli::cmd_distill_targets(cfg, pool, k, pareto_max, pareto_min, out);
    }
    if (simulate->parsed()) return clover::cli::cmd_simulate(cfg, sim_opt);
    if (analyze->parsed()) return clover::cli::cmd_analyze(cfg, pools, out);
    if (sweep->parsed()) return clover::cli::cmd_sweep_anchor(cfg, pools, scenes, out);
    if (demo->parsed()) return clover::cli::cmd_demo(cfg, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
