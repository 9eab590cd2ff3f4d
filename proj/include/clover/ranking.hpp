#pragma once

#include <vector>

#include "clover/scorer.hpp"
#include "clover/subscores.hpp"
#include "clover/trajectory.hpp"

namespace clover::ranking {

// Predicted scores for a pool, ordered best first (ties keep the lower
// candidate index). `composed` and `predicted` stay in pool order.
struct RankResult {
  std::vector<int> order;
  std::vector<double> composed;
  std::vector<eval::SubScores> predicted;
};

// Scores every pool member with the scorer and composes the predicted
// sub-scores under the given weight recipe (the deployment vector by
// default).
RankResult rank(const scene::Scene& scene, const std::vector<scene::Trajectory>& pool,
                Scorer& scorer,
                const eval::ScoreWeights& weights = eval::ScoreWeights::deployment());

// The k best-ranked candidate indices (clamped to the pool size).
std::vector<int> topk_targets(const RankResult& ranked, int k);

// Indices of vectors not strictly dominated by any other (b dominates a when
// b >= a on every component and b > a on at least one). Ascending order.
std::vector<int> pareto_front(const std::vector<std::vector<double>>& vectors);

// Non-dominated candidates in predicted sub-score space, clamped to
// [min_size, max_size]: an oversized front keeps the best composed scores, an
// undersized one is padded with the best remaining candidates. Result is
// ordered by composed score, then index.
std::vector<int> pareto_targets(const RankResult& ranked, int max_size = 8, int min_size = 2);

// Mean over targets of the distance to their nearest student (mean per-pose
// L1 with wrapped heading). Empty target set yields 0.
double set_coverage_distance(const std::vector<scene::Trajectory>& students,
                             const std::vector<scene::Trajectory>& targets,
                             double heading_weight = 1.0);

// First-stage imitation objective: nearest-to-ground-truth plus the mean
// nearest-expert term.
struct Stage1Weights {
  double lambda_gt = 1.0;
  double lambda_pe = 0.5;
};
struct Stage1Loss {
  double l_gt = 0.0;
  double l_pe = 0.0;
  double total = 0.0;
};
Stage1Loss stage1_loss_terms(const std::vector<scene::Trajectory>& students,
                             const scene::Trajectory& ground_truth,
                             const std::vector<scene::Trajectory>& experts,
                             const Stage1Weights& w = {}, double heading_weight = 1.0);

// Second-stage set-distillation objective: imitation, top-k coverage, Pareto
// coverage, and a teacher stability term (mean pairwise distance between
// matched student and teacher sets).
struct Stage2Weights {
  double lambda_traj = 0.1;
  double lambda_topk = 1.0;
  double lambda_pareto = 1.0;
  double lambda_stab = 0.05;
};
struct Stage2Loss {
  double l_traj = 0.0;
  double l_topk = 0.0;
  double l_pareto = 0.0;
  double l_stab = 0.0;
  double total = 0.0;
  bool pareto_empty = false;
};
Stage2Loss stage2_gen_loss_terms(const std::vector<scene::Trajectory>& students,
                                 const scene::Trajectory& ground_truth,
                                 const std::vector<scene::Trajectory>& topk_set,
                                 const std::vector<scene::Trajectory>& pareto_set,
                                 const std::vector<scene::Trajectory>& teacher_set,
                                 const Stage2Weights& w = {}, double heading_weight = 1.0);

// Anchor-assisted soft reranking: each candidate's quality is its scaled
// predicted score minus a normalized deviation penalty from the anchor
// trajectory,
//   Q_k = lambda_score * s_k
//       - lambda_xy * XYRMS_k / s_pos - lambda_heading * HeadRMS_k / s_heading
// with XYRMS the root-mean-square planar offset and HeadRMS the RMS wrapped
// heading offset. Zero penalty weights reproduce the plain score ordering.
struct AnchorConfig {
  double lambda_score = 2.0;
  double lambda_xy = 0.2;
  double lambda_heading = 0.5;
  double s_pos = 5.0;
  double s_heading = 0.35;
};
struct AnchorResult {
  std::vector<int> order;
  std::vector<double> quality;
  std::vector<double> penalty;
};
AnchorResult anchor_rerank(const std::vector<scene::Trajectory>& pool,
                           const std::vector<double>& predicted_scores,
                           const scene::Trajectory& anchor, const AnchorConfig& cfg);

// Achieved-vs-oracle bookkeeping for one selection: V the true score of the
// pick, O the pool's best true score, G = O - V the selection regret, plus
// best/mean true score through rank k.
struct TopkStat {
  int k = 0;
  double oracle = 0.0;
  double mean = 0.0;
};
struct SelectionReport {
  int selected_index = -1;
  double achieved = 0.0;
  double oracle = 0.0;
  double regret = 0.0;
  std::vector<TopkStat> topk;
};
SelectionReport selection_report(const std::vector<double>& true_scores,
                                 const std::vector<int>& order,
                                 const std::vector<int>& ks = {1, 2, 3, 6});

}  // namespace clover::ranking
