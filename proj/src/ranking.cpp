#include "clover/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace clover::ranking {

namespace {

// Descending by value, ascending by index on ties.
std::vector<int> argsort_desc(const std::vector<double>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
  });
  return order;
}

double min_distance_to_set(const scene::Trajectory& target,
                           const std::vector<scene::Trajectory>& students,
                           double heading_weight) {
  double best = std::numeric_limits<double>::max();
  for (const scene::Trajectory& s : students) {
    best = std::min(best, scene::trajectory_l1(target, s, heading_weight));
  }
  return best;
}

}  // namespace

RankResult rank(const scene::Scene& scene, const std::vector<scene::Trajectory>& pool,
                Scorer& scorer, const eval::ScoreWeights& weights) {
  if (pool.empty()) throw std::invalid_argument("rank: empty candidate pool");
  RankResult out;
  out.predicted.resize(pool.size());
  out.composed.resize(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    out.predicted[i] = scorer.predict(scene, pool[i], static_cast<int>(i));
    eval::validate_subscores(out.predicted[i], "rank: scorer output");
    out.composed[i] = eval::compose_weighted(out.predicted[i], weights);
  }
  out.order = argsort_desc(out.composed);
  return out;
}

std::vector<int> topk_targets(const RankResult& ranked, int k) {
  if (k < 1) throw std::invalid_argument("topk_targets: k must be positive");
  const std::size_t n = std::min<std::size_t>(ranked.order.size(), static_cast<std::size_t>(k));
  return std::vector<int>(ranked.order.begin(), ranked.order.begin() + n);
}

std::vector<int> pareto_front(const std::vector<std::vector<double>>& vectors) {
  const std::size_t n = vectors.size();
  if (n == 0) return {};
  const std::size_t dims = vectors[0].size();
  for (const auto& v : vectors) {
    if (v.size() != dims) throw std::invalid_argument("pareto_front: ragged vectors");
  }
  std::vector<int> front;
  for (std::size_t i = 0; i < n; ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < n && !dominated; ++j) {
      if (j == i) continue;
      bool ge_all = true;
      bool gt_any = false;
      for (std::size_t m = 0; m < dims; ++m) {
        if (vectors[j][m] < vectors[i][m]) {
          ge_all = false;
          break;
        }
        if (vectors[j][m] > vectors[i][m]) gt_any = true;
      }
      dominated = ge_all && gt_any;
    }
    if (!dominated) front.push_back(static_cast<int>(i));
  }
  return front;
}

std::vector<int> pareto_targets(const RankResult& ranked, int max_size, int min_size) {
  if (max_size < 1 || min_size < 0 || min_size > max_size) {
    throw std::invalid_argument("pareto_targets: bad size bounds");
  }
  std::vector<std::vector<double>> vectors;
  vectors.reserve(ranked.predicted.size());
  for (const eval::SubScores& s : ranked.predicted) {
    const auto arr = s.as_array();
    vectors.emplace_back(arr.begin(), arr.end());
  }
  std::vector<int> front = pareto_front(vectors);

  auto by_composed = [&](int a, int b) {
    if (ranked.composed[a] != ranked.composed[b]) {
      return ranked.composed[a] > ranked.composed[b];
    }
    return a < b;
  };
  std::sort(front.begin(), front.end(), by_composed);
  if (static_cast<int>(front.size()) > max_size) front.resize(max_size);

  if (static_cast<int>(front.size()) < min_size) {
    std::vector<bool> in_front(vectors.size(), false);
    for (const int i : front) in_front[static_cast<std::size_t>(i)] = true;
    std::vector<int> rest;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (!in_front[i]) rest.push_back(static_cast<int>(i));
    }
    std::sort(rest.begin(), rest.end(), by_composed);
    for (const int i : rest) {
      if (static_cast<int>(front.size()) >= min_size) break;
      front.push_back(i);
    }
    std::sort(front.begin(), front.end(), by_composed);
  }
  return front;
}

double set_coverage_distance(const std::vector<scene::Trajectory>& students,
                             const std::vector<scene::Trajectory>& targets,
                             double heading_weight) {
  if (targets.empty()) return 0.0;
  if (students.empty()) {
    throw std::invalid_argument("set_coverage_distance: empty student set");
  }
  double acc = 0.0;
  for (const scene::Trajectory& t : targets) {
    acc += min_distance_to_set(t, students, heading_weight);
  }
  return acc / static_cast<double>(targets.size());
}

Stage1Loss stage1_loss_terms(const std::vector<scene::Trajectory>& students,
                             const scene::Trajectory& ground_truth,
                             const std::vector<scene::Trajectory>& experts,
                             const Stage1Weights& w, double heading_weight) {
  if (students.empty()) throw std::invalid_argument("stage1_loss_terms: empty student set");
  Stage1Loss loss;
  loss.l_gt = min_distance_to_set(ground_truth, students, heading_weight);
  if (!experts.empty()) {
    double acc = 0.0;
    for (const scene::Trajectory& e : experts) {
      acc += min_distance_to_set(e, students, heading_weight);
    }
    loss.l_pe = acc / static_cast<double>(experts.size());
  }
  loss.total = w.lambda_gt * loss.l_gt + w.lambda_pe * loss.l_pe;
  return loss;
}

Stage2Loss stage2_gen_loss_terms(const std::vector<scene::Trajectory>& students,
                                 const scene::Trajectory& ground_truth,
                                 const std::vector<scene::Trajectory>& topk_set,
                                 const std::vector<scene::Trajectory>& pareto_set,
                                 const std::vector<scene::Trajectory>& teacher_set,
                                 const Stage2Weights& w, double heading_weight) {
  if (students.empty()) throw std::invalid_argument("stage2_gen_loss_terms: empty student set");
  Stage2Loss loss;
  loss.l_traj = min_distance_to_set(ground_truth, students, heading_weight);
  loss.l_topk = set_coverage_distance(students, topk_set, heading_weight);
  loss.pareto_empty = pareto_set.empty();
  loss.l_pareto = set_coverage_distance(students, pareto_set, heading_weight);
  if (!teacher_set.empty()) {
    if (teacher_set.size() != students.size()) {
      throw std::invalid_argument("stage2_gen_loss_terms: teacher/student size mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < students.size(); ++i) {
      acc += scene::trajectory_l1(students[i], teacher_set[i], heading_weight);
    }
    loss.l_stab = acc / static_cast<double>(students.size());
  }
  loss.total = w.lambda_traj * loss.l_traj + w.lambda_topk * loss.l_topk +
               w.lambda_pareto * loss.l_pareto + w.lambda_stab * loss.l_stab;
  return loss;
}

AnchorResult anchor_rerank(const std::vector<scene::Trajectory>& pool,
                           const std::vector<double>& predicted_scores,
                           const scene::Trajectory& anchor, const AnchorConfig& cfg) {
  if (pool.size() != predicted_scores.size()) {
    throw std::invalid_argument("anchor_rerank: pool/score size mismatch");
  }
  if (cfg.s_pos <= 0.0 || cfg.s_heading <= 0.0) {
    throw std::invalid_argument("anchor_rerank: normalizers must be positive");
  }
  AnchorResult out;
  out.quality.resize(pool.size());
  out.penalty.resize(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const scene::Trajectory& traj = pool[k];
    if (traj.poses.size() != anchor.poses.size()) {
      throw std::invalid_argument("anchor_rerank: candidate/anchor length mismatch");
    }
    double pos_sq = 0.0;
    double head_sq = 0.0;
    for (std::size_t t = 0; t < traj.poses.size(); ++t) {
      const double dx = traj.poses[t].x - anchor.poses[t].x;
      const double dy = traj.poses[t].y - anchor.poses[t].y;
      pos_sq += dx * dx + dy * dy;
      const double dh = scene::wrap_angle(traj.poses[t].heading - anchor.poses[t].heading);
      head_sq += dh * dh;
    }
    const double n = static_cast<double>(traj.poses.size());
    const double xy_rms = std::sqrt(pos_sq / n);
    const double head_rms = std::sqrt(head_sq / n);
    out.penalty[k] =
        cfg.lambda_xy * xy_rms / cfg.s_pos + cfg.lambda_heading * head_rms / cfg.s_heading;
    out.quality[k] = cfg.lambda_score * predicted_scores[k] - out.penalty[k];
  }
  out.order = argsort_desc(out.quality);
  return out;
}

SelectionReport selection_report(const std::vector<double>& true_scores,
                                 const std::vector<int>& order, const std::vector<int>& ks) {
  if (true_scores.empty() || order.empty()) {
    throw std::invalid_argument("selection_report: empty inputs");
  }
  SelectionReport report;
  report.selected_index = order.front();
  report.achieved = true_scores.at(static_cast<std::size_t>(report.selected_index));
  report.oracle = *std::max_element(true_scores.begin(), true_scores.end());
  report.regret = report.oracle - report.achieved;
  for (const int k : ks) {
    TopkStat stat;
    stat.k = k;
    const std::size_t n = std::min<std::size_t>(order.size(), static_cast<std::size_t>(k));
    double best = -std::numeric_limits<double>::max();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = true_scores.at(static_cast<std::size_t>(order[i]));
      best = std::max(best, v);
      sum += v;
    }
    stat.oracle = best;
    stat.mean = sum / static_cast<double>(n);
    report.topk.push_back(stat);
  }
  return report;
}

}  // namespace clover::ranking
