#include "clover/commands.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "clover/analytics.hpp"
#include "clover/demo_scenes.hpp"
#include "clover/distribution.hpp"
#include "clover/evaluator.hpp"
#include "clover/jsonio.hpp"
#include "clover/pseudo_expert.hpp"
#include "clover/ranking.hpp"
#include "clover/refinement.hpp"
#include "clover/rng.hpp"
#include "clover/run_config.hpp"
#include "clover/scorer.hpp"

namespace clover::cli {

namespace fs = std::filesystem;

namespace {

// One candidate record from a pool file: the trajectory plus whatever score
// columns the producer filled in.
struct PoolRow {
  std::string scene_id;
  std::string candidate_id;
  scene::Trajectory traj;
  std::optional<eval::SubScores> scores;
  std::optional<double> pdms;
  std::optional<double> epdms;
  std::optional<double> predicted;
};

scene::Trajectory trajectory_from_json(const nlohmann::json& arr, double dt) {
  scene::Trajectory traj;
  traj.dt = dt;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 3) {
      throw std::invalid_argument("trajectory rows must be [x, y, heading]");
    }
    traj.poses.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  if (traj.poses.empty()) throw std::invalid_argument("trajectory is empty");
  return traj;
}

PoolRow pool_row_from_json(const nlohmann::json& j) {
  PoolRow row;
  row.scene_id = j.at("scene_id").get<std::string>();
  row.candidate_id = j.value("candidate_id", std::string());
  row.traj = trajectory_from_json(j.at("trajectory"), j.value("dt", 0.5));
  bool has_all = true;
  for (const std::string& name : eval::SubScores::names()) {
    if (!j.contains(name)) has_all = false;
  }
  if (has_all) {
    std::map<std::string, double> table;
    for (const std::string& name : eval::SubScores::names()) {
      table[name] = j.at(name).get<double>();
    }
    row.scores = eval::subscores_from_map(table);
  }
  if (j.contains("pdms")) row.pdms = j.at("pdms").get<double>();
  if (j.contains("epdms")) row.epdms = j.at("epdms").get<double>();
  if (j.contains("predicted_score")) row.predicted = j.at("predicted_score").get<double>();
  return row;
}

std::vector<PoolRow> read_pool(const fs::path& path) {
  std::vector<PoolRow> rows;
  for (const nlohmann::json& j : util::read_jsonl(path)) rows.push_back(pool_row_from_json(j));
  if (rows.empty()) throw std::invalid_argument("pool file '" + path.string() + "' is empty");
  return rows;
}

void require_single_scene(const std::vector<PoolRow>& rows, const char* command) {
  for (const PoolRow& row : rows) {
    if (row.scene_id != rows.front().scene_id) {
      throw std::invalid_argument(std::string(command) +
                                  ": pool mixes scenes; split it per scene first");
    }
  }
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& extension) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == extension) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

// `scenes` may be one scene file or a directory of them.
std::map<std::string, scene::Scene> load_scene_set(const std::string& scenes) {
  std::map<std::string, scene::Scene> out;
  const fs::path path(scenes);
  if (scenes.empty() || !fs::exists(path)) {
    throw std::invalid_argument("scene path '" + scenes + "' does not exist");
  }
  if (fs::is_directory(path)) {
    for (const fs::path& file : sorted_files(path, ".json")) {
      scene::Scene s = scene::load_scene_file(file);
      out.emplace(s.id, std::move(s));
    }
  } else {
    scene::Scene s = scene::load_scene_file(path);
    out.emplace(s.id, std::move(s));
  }
  if (out.empty()) throw std::invalid_argument("no scene files found under '" + scenes + "'");
  return out;
}

const scene::Scene& scene_for(const std::map<std::string, scene::Scene>& scenes,
                              const std::string& scene_id) {
  const auto it = scenes.find(scene_id);
  if (it == scenes.end()) {
    throw std::invalid_argument("scene '" + scene_id + "' not found in the scene set");
  }
  return it->second;
}

std::unique_ptr<ranking::Scorer> make_scorer(const std::string& spec,
                                             const eval::EvaluatorConfig& eval_cfg,
                                             std::uint64_t master_seed) {
  if (spec == "oracle") return std::make_unique<ranking::OracleScorer>(eval_cfg);
  if (spec.rfind("noisy:", 0) == 0) {
    std::vector<std::string> parts;
    std::size_t start = 6;
    while (start <= spec.size()) {
      const std::size_t colon = spec.find(':', start);
      parts.push_back(spec.substr(start, colon == std::string::npos ? colon : colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() == 2) {
      return std::make_unique<ranking::NoisyScorer>(eval_cfg, std::stod(parts[0]), 0.0,
                                                    std::stoull(parts[1]));
    }
    if (parts.size() == 3) {
      return std::make_unique<ranking::NoisyScorer>(eval_cfg, std::stod(parts[0]),
                                                    std::stod(parts[1]),
                                                    std::stoull(parts[2]));
    }
    throw std::invalid_argument("scorer spec must be noisy:<eps>:<seed> or "
                                "noisy:<eps>:<p_flip>:<seed>");
  }
  if (spec.rfind("tabular:", 0) == 0) {
    return std::make_unique<ranking::TabularScorer>(
        ranking::TabularScorer::from_jsonl(spec.substr(8)));
  }
  (void)master_seed;
  throw std::invalid_argument("unknown scorer spec '" + spec + "'");
}

std::vector<scene::Trajectory> pool_trajectories(const std::vector<PoolRow>& rows) {
  std::vector<scene::Trajectory> trajs;
  trajs.reserve(rows.size());
  for (const PoolRow& row : rows) trajs.push_back(row.traj);
  return trajs;
}

// True composed scores: stored pdms column when present, else the oracle.
std::vector<double> true_scores_for(const scene::Scene& scn, const std::vector<PoolRow>& rows,
                                    const RunConfig& cfg) {
  std::vector<double> out(rows.size());
  const eval::ScoreWeights weights = resolve_score_weights(cfg.score_weights);
  std::vector<scene::Trajectory> missing;
  std::vector<std::size_t> missing_at;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].pdms) {
      out[i] = *rows[i].pdms;
    } else if (rows[i].scores) {
      out[i] = eval::compose_weighted(*rows[i].scores, weights);
    } else {
      missing.push_back(rows[i].traj);
      missing_at.push_back(i);
    }
  }
  if (!missing.empty()) {
    const std::vector<eval::SubScores> scored =
        eval::evaluate_batch(scn, missing, cfg.evaluator, cfg.jobs);
    for (std::size_t k = 0; k < missing_at.size(); ++k) {
      out[missing_at[k]] = eval::compose_weighted(scored[k], weights);
    }
  }
  return out;
}

std::string candidate_label(const PoolRow& row, std::size_t index) {
  if (!row.candidate_id.empty()) return row.candidate_id;
  char buf[24];
  std::snprintf(buf, sizeof(buf), "row_%04zu", index);
  return buf;
}

nlohmann::json selection_report_to_json(const ranking::SelectionReport& rep) {
  nlohmann::json j;
  j["selected_index"] = rep.selected_index;
  j["achieved"] = rep.achieved;
  j["oracle"] = rep.oracle;
  j["regret"] = rep.regret;
  nlohmann::json topk = nlohmann::json::array();
  for (const ranking::TopkStat& t : rep.topk) {
    topk.push_back({{"k", t.k}, {"oracle", t.oracle}, {"mean", t.mean}});
  }
  j["topk"] = std::move(topk);
  return j;
}

void write_scene_outputs(const scene::Scene& scn, const pe::PipelineResult& result,
                         const pe::FamilyConfig& families, const fs::path& out_dir) {
  std::vector<nlohmann::json> rows;
  for (const pe::ScoredCandidate& sc : result.kept) {
    rows.push_back(pe::scored_candidate_to_json(scn, sc));
  }
  for (const pe::ScoredCandidate& sc : result.boundary_extras) {
    rows.push_back(pe::scored_candidate_to_json(scn, sc));
  }
  util::write_jsonl_atomic(out_dir / (scn.id + "_candidates.jsonl"), rows);
  util::write_json_atomic(out_dir / (scn.id + "_pseudo_experts.json"),
                          pe::training_sample_to_json(scn, result.training,
                                                      families.training_max));
}

// Shared by analyze and demo: pool stats for one scored-candidate file.
analytics::PoolStats stats_for_pool(const std::vector<PoolRow>& rows, const RunConfig& cfg) {
  std::vector<double> truth(rows.size());
  std::vector<double> ordering_key(rows.size());
  const eval::ScoreWeights weights = resolve_score_weights(cfg.score_weights);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].pdms) {
      truth[i] = *rows[i].pdms;
    } else if (rows[i].scores) {
      truth[i] = eval::compose_weighted(*rows[i].scores, weights);
    } else {
      throw std::invalid_argument("analyze: pool row lacks both pdms and sub-scores");
    }
    ordering_key[i] = rows[i].predicted ? *rows[i].predicted : truth[i];
  }
  std::vector<int> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return ordering_key[static_cast<std::size_t>(a)] > ordering_key[static_cast<std::size_t>(b)];
  });
  return analytics::compute_pool_stats(rows.front().scene_id, pool_trajectories(rows), truth,
                                       order);
}

nlohmann::json pool_stats_to_json(const analytics::PoolStats& stats) {
  const std::vector<std::string> header = analytics::pool_stats_header();
  const std::vector<double> values = analytics::pool_stats_values(stats);
  nlohmann::json j;
  j["scene_id"] = stats.scene_id;
  for (std::size_t i = 0; i < values.size(); ++i) j[header[i + 1]] = values[i];
  return j;
}

int simulate_enrichment(const RunConfig& cfg, const SimulateOptions& opt, bool expected,
                        nlohmann::json& out) {
  int violations = 0;
  double min_slack = 1e9;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = util::sub_seed(cfg.seed, "enrichment", t);
    util::Rng rng(seed);
    const sim::DiscreteProposalDistribution mu =
        sim::random_distribution(rng.uniform_int(2, 32), util::sub_seed(seed, 1));
    const sim::DiscreteProposalDistribution nu =
        sim::random_distribution(rng.uniform_int(2, 32), util::sub_seed(seed, 2));
    sim::EnrichmentStepConfig step;
    step.alpha = rng.uniform(0.0, 1.0);
    step.eta = rng.uniform(0.0, 0.3);
    step.r_high = rng.uniform(0.5, 0.99);
    step.adversarial = true;
    step.seed = util::sub_seed(seed, 3);
    const sim::EnrichmentStepResult res = expected ? sim::expected_score_step(mu, nu, step)
                                                   : sim::enrichment_step(mu, nu, step);
    min_slack = std::min(min_slack, res.report.slack);
    if (!res.report.satisfied) ++violations;
  }
  out["trials"] = opt.trials;
  out["violations"] = violations;
  out["min_slack"] = min_slack;
  return violations;
}

int simulate_multiround(const RunConfig& cfg, const SimulateOptions& opt, nlohmann::json& out) {
  int violations = 0;
  int vacuous = 0;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = util::sub_seed(cfg.seed, "multiround", t);
    util::Rng rng(seed);
    const sim::DiscreteProposalDistribution mu0 =
        sim::random_distribution(rng.uniform_int(2, 8), util::sub_seed(seed, 1));
    sim::EnrichmentStepConfig step;
    step.alpha = rng.uniform(0.2, 0.8);
    step.eta = rng.uniform(0.0, 0.05);
    step.adversarial = true;
    step.seed = util::sub_seed(seed, 2);
    const bool cheap = t % 10 != 0;
    sim::TargetSelector selector = [cheap](const sim::DiscreteProposalDistribution& cur, int) {
      if (cheap) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < cur.size(); ++i) {
          if (cur.scores[i] > cur.scores[best]) best = i;
        }
        sim::DiscreteProposalDistribution nu;
        nu.scores = {cur.scores[best]};
        nu.probs = {1.0};
        return nu;
      }
      return sim::conditional_top_fraction(cur, 0.25);
    };
    const sim::MultiRoundResult res = sim::multi_round(mu0, selector, step, opt.rounds);
    if (!res.satisfied) ++violations;
    if (res.vacuous) ++vacuous;
  }
  out["trials"] = opt.trials;
  out["rounds"] = opt.rounds;
  out["violations"] = violations;
  out["vacuous"] = vacuous;
  return violations;
}

int simulate_monotone(const RunConfig& cfg, const SimulateOptions& opt, nlohmann::json& out) {
  int violations = 0;
  int premise_failures = 0;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = util::sub_seed(cfg.seed, "monotone", t);
    util::Rng rng(seed);
    const int n = rng.uniform_int(2, 16);
    const double eps = rng.uniform(0.0, 0.2);
    const double alpha_t = rng.uniform(0.0, 0.1);
    sim::SurrogatePolicy before;
    double prob_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      before.true_scores.push_back(rng.uniform(0.0, 1.0));
      before.surrogate_scores.push_back(
          std::clamp(before.true_scores.back() + rng.uniform(-eps, eps), 0.0, 1.0));
      before.probs.push_back(-std::log(rng.uniform(1e-12, 1.0)));
      prob_sum += before.probs.back();
    }
    for (double& p : before.probs) p /= prob_sum;
    double adjust = 1.0;
    for (std::size_t i = 1; i < before.probs.size(); ++i) adjust -= before.probs[i];
    before.probs[0] = adjust;

    sim::SurrogatePolicy after = before;
    std::size_t best = 0;
    for (std::size_t i = 1; i < after.surrogate_scores.size(); ++i) {
      if (after.surrogate_scores[i] > after.surrogate_scores[best]) best = i;
    }
    std::fill(after.probs.begin(), after.probs.end(), 0.0);
    after.probs[best] = 1.0;

    const sim::MonotonicityReport rep = sim::monotonicity_check(before, after, eps, alpha_t);
    if (!rep.premise_ok) ++premise_failures;
    if (!rep.satisfied) ++violations;
  }

  // Two-point construction that meets the bound with equality.
  {
    const double eps = 0.05;
    sim::SurrogatePolicy a{{1.0}, {0.5}, {0.45}};
    sim::SurrogatePolicy b{{1.0}, {0.4}, {0.45}};
    const sim::MonotonicityReport rep = sim::monotonicity_check(a, b, eps, 0.0);
    out["worst_case_slack"] = rep.slack;
    if (!rep.premise_ok || !rep.satisfied || std::abs(rep.slack) > 1e-9) ++violations;
  }
  out["trials"] = opt.trials;
  out["violations"] = violations;
  out["premise_failures"] = premise_failures;
  return violations;
}

int simulate_drift(const RunConfig& cfg, nlohmann::json& out) {
  const double eps = 0.02;
  const double rho = 0.05;
  const std::vector<int> horizons{4, 8, 16, 32, 64};
  std::vector<double> xs, refit_final, fixed_final;
  bool refit_all = true;
  for (const int T : horizons) {
    const sim::DriftResult res =
        sim::drift_experiment(T, eps, rho, util::sub_seed(cfg.seed, "drift", T));
    refit_all = refit_all && res.refit_within;
    xs.push_back(static_cast<double>(T));
    refit_final.push_back(res.refit_cumulative.back());
    fixed_final.push_back(res.fixed_cumulative.back());
  }
  const double slope_refit = sim::loglog_slope(xs, refit_final);
  const double slope_fixed = sim::loglog_slope(xs, fixed_final);
  out["eps"] = eps;
  out["rho"] = rho;
  out["horizons"] = horizons;
  out["refit_final"] = refit_final;
  out["fixed_final"] = fixed_final;
  out["slope_refit"] = slope_refit;
  out["slope_fixed"] = slope_fixed;
  out["slope_gap"] = slope_fixed - slope_refit;
  out["refit_within_all"] = refit_all;
  const bool ok = refit_all && slope_fixed - slope_refit >= 0.5;
  out["violations"] = ok ? 0 : 1;
  return ok ? 0 : 1;
}

int simulate_pareto(const RunConfig& cfg, const SimulateOptions& opt, nlohmann::json& out) {
  int violations = 0;
  int coverage_violations = 0;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = util::sub_seed(cfg.seed, "pareto", t);
    util::Rng rng(seed);
    std::vector<std::vector<double>> vectors(50, std::vector<double>(3));
    for (auto& v : vectors) {
      for (double& x : v) x = rng.uniform(0.0, 1.0);
    }
    const sim::ParetoConsistencyResult res =
        sim::pareto_consistency_check(vectors, 0.05, 1e-6, util::sub_seed(seed, 1), 1.0, 0.1);
    violations += res.violations;
    coverage_violations += res.coverage_violations;
  }
  out["trials"] = opt.trials;
  out["violations"] = violations;
  out["coverage_violations"] = coverage_violations;
  return violations + coverage_violations;
}

int simulate_margin(const RunConfig& cfg, const SimulateOptions& opt, nlohmann::json& out) {
  int violations = 0;
  for (int t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = util::sub_seed(cfg.seed, "margin", t);
    util::Rng rng(seed);
    const int n_high = rng.uniform_int(2, 8);
    const int n_low = rng.uniform_int(2, 8);
    const double eps = rng.uniform(0.0, 0.1);
    const double gamma = 2.0 * eps + rng.uniform(0.01, 0.2);
    const double r_low = rng.uniform(0.1, 0.5);
    const sim::MarginTrialReport rep =
        sim::margin_trial(n_high, n_low, r_low + gamma, r_low, eps, util::sub_seed(seed, 1));
    violations += rep.violations;
  }
  out["trials"] = opt.trials;
  out["violations"] = violations;
  return violations;
}

int simulate_report(const RunConfig& cfg, const SimulateOptions& opt, nlohmann::json& out) {
  std::vector<sim::ScenePool> pools;
  const int scenes = std::max(4, opt.trials / 10);
  for (int s = 0; s < scenes; ++s) {
    const std::uint64_t seed = util::sub_seed(cfg.seed, "report", s);
    util::Rng rng(seed);
    sim::ScenePool pool;
    pool.scene_id = "sim_" + std::to_string(s);
    for (int i = 0; i < 64; ++i) {
      const double r = rng.bernoulli(0.3) ? 1.0 : rng.uniform(0.0, 1.0);
      pool.r_true.push_back(r);
      pool.s_pred.push_back(std::clamp(r + rng.uniform(-0.05, 0.05), 0.0, 1.0));
    }
    pools.push_back(std::move(pool));
  }
  const sim::EnrichmentReport rep = sim::enrichment_report(pools);
  out["scenes"] = scenes;
  out["pooled_full_rate"] = rep.pooled_full_rate;
  nlohmann::json precision = nlohmann::json::array();
  for (const sim::PrecisionRow& row : rep.precision) {
    precision.push_back({{"threshold", row.threshold},
                         {"count", row.count},
                         {"mean_true", row.mean_true},
                         {"frac_true_ge_090", row.frac_true_ge_090},
                         {"frac_true_full", row.frac_true_full}});
  }
  out["precision"] = std::move(precision);
  out["pairwise_accuracy"] = rep.pairwise_accuracy;
  out["pairwise_pairs"] = rep.pairwise_pairs;
  nlohmann::json margins;
  for (const auto& [pct, rate] : rep.margin_rates) margins[std::to_string(pct)] = rate;
  out["margin_rates"] = std::move(margins);
  nlohmann::json topk;
  for (const auto& [k, v] : rep.topk_mean_best) topk[std::to_string(k)] = v;
  out["topk_mean_best"] = std::move(topk);
  out["violations"] = 0;
  return 0;
}

}  // namespace

int cmd_gen_pseudo_experts(const RunConfig& cfg, const std::string& scenes,
                           const std::string& out_dir) {
  const std::map<std::string, scene::Scene> scene_set = load_scene_set(scenes);
  fs::create_directories(out_dir);
  for (const auto& [id, scn] : scene_set) {
    const pe::PipelineResult result =
        pe::run_pipeline(scn, cfg.families, cfg.evaluator, cfg.seed, cfg.jobs);
    write_scene_outputs(scn, result, cfg.families, out_dir);
    std::printf("%s: generated=%zu scored=%zu kept=%zu extras=%zu training=%zu%s\n",
                id.c_str(), result.generated.size(), result.scored.size(),
                result.kept.size(), result.boundary_extras.size(),
                result.training.experts.size(),
                result.training.human_fallback ? " (human fallback)" : "");
  }
  return 0;
}

int cmd_score(const RunConfig& cfg, const std::string& scenes, const std::string& pool,
              const std::string& out, const std::string& cache) {
  const std::map<std::string, scene::Scene> scene_set = load_scene_set(scenes);
  const std::vector<PoolRow> rows = read_pool(pool);

  eval::ScoreCache score_cache;
  if (!cache.empty() && fs::exists(cache)) score_cache = eval::ScoreCache::load(cache);

  std::vector<nlohmann::json> out_rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const scene::Scene& scn = scene_for(scene_set, rows[i].scene_id);
    const std::uint64_t hash = scene::trajectory_hash(rows[i].traj);
    eval::SubScores scores;
    if (const auto hit = score_cache.lookup(scn.id, hash)) {
      scores = *hit;
    } else {
      scores = eval::compute_subscores(scn, rows[i].traj, cfg.evaluator);
      score_cache.insert(scn.id, hash, scores);
    }
    eval::ScoredRow scored{scn.id, candidate_label(rows[i], i), scores,
                           eval::compose_pdms(scores),
                           eval::compose_epdms(scores, eval::resolve_human_subscores(scn))};
    nlohmann::json j = eval::scored_row_to_json(scored);
    nlohmann::json traj = nlohmann::json::array();
    for (const scene::Pose2D& p : rows[i].traj.poses) traj.push_back({p.x, p.y, p.heading});
    j["trajectory"] = std::move(traj);
    j["dt"] = rows[i].traj.dt;
    out_rows.push_back(std::move(j));
  }
  util::write_jsonl_atomic(out, out_rows);
  if (!cache.empty()) score_cache.save(cache);
  std::printf("scored %zu rows (%zu cache hits)\n", rows.size(), score_cache.hits());
  return 0;
}

int cmd_rank(const RunConfig& cfg, const RankOptions& opt) {
  const std::vector<PoolRow> rows = read_pool(opt.pool);
  require_single_scene(rows, "rank");
  const std::map<std::string, scene::Scene> scene_set = load_scene_set(opt.scenes);
  const scene::Scene& scn = scene_for(scene_set, rows.front().scene_id);

  const std::vector<scene::Trajectory> trajs = pool_trajectories(rows);
  const std::unique_ptr<ranking::Scorer> scorer =
      make_scorer(opt.scorer, cfg.evaluator, cfg.seed);
  const eval::ScoreWeights weights = resolve_score_weights(cfg.score_weights);
  const ranking::RankResult ranked = ranking::rank(scn, trajs, *scorer, weights);
  const std::vector<double> truth = true_scores_for(scn, rows, cfg);

  std::vector<int> order = ranked.order;
  std::vector<double> quality(rows.size(), 0.0);
  const bool with_anchor = !opt.anchor_traj.empty();
  if (with_anchor) {
    const nlohmann::json aj = util::read_json(opt.anchor_traj);
    const scene::Trajectory anchor =
        aj.is_array() ? trajectory_from_json(aj, trajs.front().dt)
                      : trajectory_from_json(aj.at("trajectory"),
                                             aj.value("dt", trajs.front().dt));
    ranking::AnchorConfig anchor_cfg = cfg.anchor;
    if (opt.lambda_s) anchor_cfg.lambda_score = *opt.lambda_s;
    if (opt.lambda_xy) anchor_cfg.lambda_xy = *opt.lambda_xy;
    if (opt.lambda_psi) anchor_cfg.lambda_heading = *opt.lambda_psi;
    const ranking::AnchorResult res =
        ranking::anchor_rerank(trajs, ranked.composed, anchor, anchor_cfg);
    order = res.order;
    quality = res.quality;
  }

  std::vector<int> rank_of(rows.size(), 0);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    rank_of[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos) + 1;
  }
  std::vector<std::string> lines;
  lines.push_back(
      util::csv_join({"candidate_id", "predicted_score", "true_score", "q", "rank"}));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lines.push_back(util::csv_join({candidate_label(rows[i], i),
                                    util::format_double(ranked.composed[i]),
                                    util::format_double(truth[i]),
                                    util::format_double(with_anchor ? quality[i] : 0.0),
                                    std::to_string(rank_of[i])}));
  }
  std::string body;
  for (const std::string& line : lines) {
    body += line;
    body += '\n';
  }
  util::write_file_atomic(opt.out_prefix + ".csv", body);

  const ranking::SelectionReport report = ranking::selection_report(truth, order);
  nlohmann::json j = selection_report_to_json(report);
  j["scene_id"] = scn.id;
  j["scorer"] = scorer->name();
  j["anchor"] = with_anchor;
  util::write_json_atomic(opt.out_prefix + ".json", j);
  std::printf("selected=%d achieved=%.6f oracle=%.6f regret=%.6f\n", report.selected_index,
              report.achieved, report.oracle, report.regret);
  return 0;
}

int cmd_distill_targets(const RunConfig& cfg, const std::string& pool, int k, int pareto_max,
                        int pareto_min, const std::string& out) {
  const std::vector<PoolRow> rows = read_pool(pool);
  require_single_scene(rows, "distill-targets");
  const eval::ScoreWeights weights = resolve_score_weights(cfg.score_weights);

  ranking::RankResult ranked;
  ranked.predicted.resize(rows.size());
  ranked.composed.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].scores) {
      throw std::invalid_argument("distill-targets: pool rows need the ten sub-score columns");
    }
    ranked.predicted[i] = *rows[i].scores;
    ranked.composed[i] = rows[i].predicted ? *rows[i].predicted
                                           : eval::compose_weighted(*rows[i].scores, weights);
  }
  ranked.order.resize(rows.size());
  std::iota(ranked.order.begin(), ranked.order.end(), 0);
  std::stable_sort(ranked.order.begin(), ranked.order.end(), [&](int a, int b) {
    return ranked.composed[static_cast<std::size_t>(a)] >
           ranked.composed[static_cast<std::size_t>(b)];
  });

  const std::vector<int> topk = ranking::topk_targets(ranked, k);
  const std::vector<int> pareto = ranking::pareto_targets(ranked, pareto_max, pareto_min);
  auto ids = [&](const std::vector<int>& idx) {
    nlohmann::json arr = nlohmann::json::array();
    for (const int i : idx) arr.push_back(candidate_label(rows[static_cast<std::size_t>(i)], i));
    return arr;
  };
  nlohmann::json j;
  j["scene_id"] = rows.front().scene_id;
  j["k"] = k;
  j["topk_indices"] = topk;
  j["topk_ids"] = ids(topk);
  j["pareto_indices"] = pareto;
  j["pareto_ids"] = ids(pareto);
  util::write_json_atomic(out, j);
  std::printf("topk=%zu pareto=%zu\n", topk.size(), pareto.size());
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt) {
  nlohmann::json out;
  out["check"] = opt.check;
  out["seed"] = cfg.seed;
  int violations = 0;
  if (opt.check == "enrichment") {
    violations = simulate_enrichment(cfg, opt, false, out);
  } else if (opt.check == "expected") {
    violations = simulate_enrichment(cfg, opt, true, out);
  } else if (opt.check == "multiround") {
    violations = simulate_multiround(cfg, opt, out);
  } else if (opt.check == "monotone") {
    violations = simulate_monotone(cfg, opt, out);
  } else if (opt.check == "drift") {
    violations = simulate_drift(cfg, out);
  } else if (opt.check == "pareto") {
    violations = simulate_pareto(cfg, opt, out);
  } else if (opt.check == "margin") {
    violations = simulate_margin(cfg, opt, out);
  } else if (opt.check == "report") {
    violations = simulate_report(cfg, opt, out);
  } else {
    throw std::invalid_argument("unknown check '" + opt.check + "'");
  }
  if (!opt.out.empty()) util::write_json_atomic(opt.out, out);
  std::printf("%s: violations=%d\n", opt.check.c_str(), violations);
  return violations == 0 ? 0 : 2;
}

int cmd_analyze(const RunConfig& cfg, const std::string& pools_dir,
                const std::string& out_csv) {
  const fs::path dir(pools_dir);
  if (!fs::is_directory(dir)) {
    throw std::invalid_argument("analyze: '" + pools_dir + "' is not a directory");
  }
  std::vector<analytics::PoolStats> stats;
  for (const fs::path& file : sorted_files(dir, ".jsonl")) {
    const std::vector<PoolRow> rows = read_pool(file);
    require_single_scene(rows, "analyze");
    stats.push_back(stats_for_pool(rows, cfg));
  }
  if (stats.empty()) {
    throw std::invalid_argument("analyze: no .jsonl pool files under '" + pools_dir + "'");
  }
  analytics::write_pool_stats_csv(out_csv, stats);
  nlohmann::json rows = nlohmann::json::array();
  for (const analytics::PoolStats& s : stats) rows.push_back(pool_stats_to_json(s));
  fs::path json_path(out_csv);
  json_path.replace_extension(".json");
  util::write_json_atomic(json_path, rows);
  std::printf("analyzed %zu pools -> %s\n", stats.size(), out_csv.c_str());
  return 0;
}

int cmd_sweep_anchor(const RunConfig& cfg, const std::string& pools,
                     const std::string& scenes, const std::string& out_csv) {
  const std::map<std::string, scene::Scene> scene_set = load_scene_set(scenes);
  std::vector<std::vector<PoolRow>> pool_list;
  const fs::path pool_path(pools);
  if (fs::is_directory(pool_path)) {
    for (const fs::path& file : sorted_files(pool_path, ".jsonl")) {
      pool_list.push_back(read_pool(file));
    }
  } else {
    pool_list.push_back(read_pool(pool_path));
  }
  if (pool_list.empty()) throw std::invalid_argument("sweep-anchor: no pools found");

  struct Triple {
    double s, xy, psi;
  };
  const std::vector<Triple> grid{{2.00, 0.20, 0.50}, {1.75, 0.20, 0.75}, {2.00, 0.20, 0.75},
                                 {2.25, 0.20, 0.75}, {1.75, 0.20, 1.00}, {2.00, 0.20, 1.00},
                                 {2.25, 0.20, 1.00}, {2.00, 0.25, 0.50}, {2.00, 0.25, 0.75},
                                 {1.75, 0.35, 0.75}, {2.00, 0.35, 0.75}, {2.25, 0.35, 0.75},
                                 {1.75, 0.35, 1.00}, {2.00, 0.35, 1.00}, {2.25, 0.35, 1.00}};

  struct PoolData {
    std::vector<scene::Trajectory> trajs;
    std::vector<double> predicted;
    std::vector<eval::SubScores> scores;
    std::vector<double> epdms;
    scene::Trajectory anchor;
  };
  std::vector<PoolData> data;
  for (const std::vector<PoolRow>& rows : pool_list) {
    require_single_scene(rows, "sweep-anchor");
    const scene::Scene& scn = scene_for(scene_set, rows.front().scene_id);
    PoolData d;
    d.trajs = pool_trajectories(rows);
    d.anchor = scn.human;
    const eval::SubScores human = eval::resolve_human_subscores(scn);
    for (const PoolRow& row : rows) {
      if (!row.scores) {
        throw std::invalid_argument("sweep-anchor: pool rows need the ten sub-score columns");
      }
      d.scores.push_back(*row.scores);
      d.epdms.push_back(row.epdms ? *row.epdms : eval::compose_epdms(*row.scores, human));
      d.predicted.push_back(row.predicted ? *row.predicted : d.epdms.back());
    }
    data.push_back(std::move(d));
  }

  auto selected_means = [&](const std::optional<Triple>& t) {
    double score = 0.0, ep = 0.0, ec = 0.0, hc = 0.0;
    for (const PoolData& d : data) {
      int pick;
      if (t) {
        ranking::AnchorConfig ac = cfg.anchor;
        ac.lambda_score = t->s;
        ac.lambda_xy = t->xy;
        ac.lambda_heading = t->psi;
        pick = ranking::anchor_rerank(d.trajs, d.predicted, d.anchor, ac).order.front();
      } else {
        pick = static_cast<int>(std::distance(
            d.predicted.begin(), std::max_element(d.predicted.begin(), d.predicted.end())));
      }
      const auto& s = d.scores[static_cast<std::size_t>(pick)];
      score += d.epdms[static_cast<std::size_t>(pick)];
      ep += s.ep;
      ec += s.ec;
      hc += s.hc;
    }
    const double n = static_cast<double>(data.size());
    return std::array<double, 4>{score / n, ep / n, ec / n, hc / n};
  };

  std::vector<std::string> lines;
  lines.push_back(util::csv_join({"lambda_s", "lambda_xy", "lambda_psi", "score", "ep", "ec",
                                  "hc"}));
  const std::array<double, 4> base = selected_means(std::nullopt);
  lines.push_back(util::csv_join({"-", "-", "-", util::format_double(base[0]),
                                  util::format_double(base[1]), util::format_double(base[2]),
                                  util::format_double(base[3])}));
  for (const Triple& t : grid) {
    const std::array<double, 4> m = selected_means(t);
    lines.push_back(util::csv_join(
        {util::format_double(t.s), util::format_double(t.xy), util::format_double(t.psi),
         util::format_double(m[0]), util::format_double(m[1]), util::format_double(m[2]),
         util::format_double(m[3])}));
  }
  std::string body;
  for (const std::string& line : lines) {
    body += line;
    body += '\n';
  }
  util::write_file_atomic(out_csv, body);
  std::printf("swept %zu configurations over %zu pools -> %s\n", grid.size() + 1, data.size(),
              out_csv.c_str());
  return 0;
}

int cmd_demo(const RunConfig& cfg, const std::string& out_dir) {
  const fs::path root(out_dir);
  fs::create_directories(root / "scenes");
  fs::create_directories(root / "candidates");
  fs::create_directories(root / "pseudo_experts");
  fs::create_directories(root / "targets");

  util::write_json_atomic(root / "config.json", run_config_to_json(cfg));
  const std::vector<scene::Scene> scenes = demo_scenes();
  const eval::ScoreWeights weights = resolve_score_weights(cfg.score_weights);

  std::vector<analytics::PoolStats> stats;
  std::vector<std::string> selection_lines;
  selection_lines.push_back(util::csv_join(
      {"scene_id", "pool", "training", "selected_id", "achieved", "oracle", "regret"}));

  for (const scene::Scene& scn : scenes) {
    scene::save_scene_file(scn, root / "scenes" / (scn.id + ".json"));
    const pe::PipelineResult result =
        pe::run_pipeline(scn, cfg.families, cfg.evaluator, cfg.seed, cfg.jobs);

    std::vector<pe::ScoredCandidate> pool = result.kept;
    pool.insert(pool.end(), result.boundary_extras.begin(), result.boundary_extras.end());
    std::vector<nlohmann::json> rows;
    for (const pe::ScoredCandidate& sc : pool) {
      rows.push_back(pe::scored_candidate_to_json(scn, sc));
    }
    util::write_jsonl_atomic(root / "candidates" / (scn.id + "_candidates.jsonl"), rows);
    util::write_json_atomic(
        root / "pseudo_experts" / (scn.id + ".json"),
        pe::training_sample_to_json(scn, result.training, cfg.families.training_max));

    ranking::RankResult ranked;
    std::vector<double> truth;
    std::vector<scene::Trajectory> trajs;
    for (const pe::ScoredCandidate& sc : pool) {
      ranked.predicted.push_back(sc.scores);
      ranked.composed.push_back(eval::compose_weighted(sc.scores, weights));
      truth.push_back(ranked.composed.back());
      trajs.push_back(sc.cand.traj);
    }
    ranked.order.resize(pool.size());
    std::iota(ranked.order.begin(), ranked.order.end(), 0);
    std::stable_sort(ranked.order.begin(), ranked.order.end(), [&](int a, int b) {
      return ranked.composed[static_cast<std::size_t>(a)] >
             ranked.composed[static_cast<std::size_t>(b)];
    });

    const std::vector<int> topk = ranking::topk_targets(ranked, cfg.families.training_max);
    const std::vector<int> pareto = ranking::pareto_targets(ranked);
    nlohmann::json targets;
    targets["scene_id"] = scn.id;
    targets["topk_indices"] = topk;
    targets["pareto_indices"] = pareto;
    util::write_json_atomic(root / "targets" / (scn.id + ".json"), targets);

    stats.push_back(analytics::compute_pool_stats(scn.id, trajs, truth, ranked.order));

    const ranking::SelectionReport rep = ranking::selection_report(truth, ranked.order);
    const pe::ScoredCandidate& best = pool[static_cast<std::size_t>(rep.selected_index)];
    char selected_id[32];
    std::snprintf(selected_id, sizeof(selected_id), "%s_%04d",
                  best.interpolated ? "interp" : "cand", best.cand.index);
    selection_lines.push_back(util::csv_join(
        {scn.id, std::to_string(pool.size()), std::to_string(result.training.experts.size()),
         selected_id, util::format_double(rep.achieved), util::format_double(rep.oracle),
         util::format_double(rep.regret)}));
  }

  analytics::write_pool_stats_csv(root / "report.csv", stats);
  nlohmann::json report_rows = nlohmann::json::array();
  for (const analytics::PoolStats& s : stats) report_rows.push_back(pool_stats_to_json(s));
  util::write_json_atomic(root / "report.json", report_rows);

  std::string body;
  for (const std::string& line : selection_lines) {
    body += line;
    body += '\n';
  }
  util::write_file_atomic(root / "selection.csv", body);
  std::printf("demo wrote %zu scenes under %s\n", scenes.size(), out_dir.c_str());
  return 0;
}

}  // namespace clover::cli
