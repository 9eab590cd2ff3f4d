#include "clover/analytics.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "clover/geometry.hpp"
#include "clover/jsonio.hpp"

namespace clover::analytics {

namespace {

void require_rectangular(const std::vector<scene::Trajectory>& pool, const char* who) {
  for (const scene::Trajectory& traj : pool) {
    if (traj.poses.empty()) throw std::invalid_argument(std::string(who) + ": empty trajectory");
    if (traj.poses.size() != pool.front().poses.size()) {
      throw std::invalid_argument(std::string(who) + ": trajectory lengths differ");
    }
  }
}

scene::Vec2 endpoint(const scene::Trajectory& traj) { return traj.poses.back().position(); }

PairStats pair_stats_subset(const std::vector<scene::Trajectory>& pool,
                            const std::vector<std::size_t>& subset) {
  PairStats out;
  if (subset.size() < 2) {
    out.degenerate = true;
    return out;
  }
  const std::size_t steps = pool[subset[0]].poses.size();
  long pairs = 0;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      const scene::Trajectory& ta = pool[subset[a]];
      const scene::Trajectory& tb = pool[subset[b]];
      double acc = 0.0;
      for (std::size_t t = 0; t < steps; ++t) {
        acc += (ta.poses[t].position() - tb.poses[t].position()).norm();
      }
      out.ade += acc / static_cast<double>(steps);
      out.fde += (ta.poses.back().position() - tb.poses.back().position()).norm();
      ++pairs;
    }
  }
  out.ade /= static_cast<double>(pairs);
  out.fde /= static_cast<double>(pairs);
  return out;
}

int clusters_subset(const std::vector<scene::Trajectory>& pool,
                    const std::vector<std::size_t>& subset, double radius) {
  std::vector<scene::Vec2> seeds;
  for (const std::size_t i : subset) {
    const scene::Vec2 p = endpoint(pool[i]);
    bool assigned = false;
    for (const scene::Vec2& seed : seeds) {
      if ((p - seed).norm() <= radius) {
        assigned = true;
        break;
      }
    }
    if (!assigned) seeds.push_back(p);
  }
  return static_cast<int>(seeds.size());
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

PairStats pairwise_ade_fde(const std::vector<scene::Trajectory>& pool) {
  require_rectangular(pool, "pairwise_ade_fde");
  return pair_stats_subset(pool, all_indices(pool.size()));
}

EndpointSpread endpoint_spread(const std::vector<scene::Trajectory>& pool) {
  require_rectangular(pool, "endpoint_spread");
  EndpointSpread out;
  if (pool.empty()) return out;
  std::vector<scene::Vec2> points;
  points.reserve(pool.size());
  scene::Vec2 centroid{0.0, 0.0};
  for (const scene::Trajectory& traj : pool) {
    points.push_back(endpoint(traj));
    centroid = centroid + points.back();
  }
  centroid = centroid * (1.0 / static_cast<double>(points.size()));
  double acc = 0.0;
  for (const scene::Vec2& p : points) {
    const double d = (p - centroid).norm();
    acc += d * d;
  }
  out.std_radius = std::sqrt(acc / static_cast<double>(points.size()));
  const scene::Polygon hull = scene::convex_hull(points);
  out.area = hull.size() >= 3 ? scene::polygon_area(hull) : 0.0;
  return out;
}

double effective_rank(const std::vector<scene::Trajectory>& pool) {
  require_rectangular(pool, "effective_rank");
  if (pool.empty()) throw std::invalid_argument("effective_rank: empty pool");
  const std::size_t n = pool.size();
  const std::size_t cols = 2 * pool.front().poses.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < pool.front().poses.size(); ++t) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * t)) = pool[i].poses[t].x;
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * t + 1)) = pool[i].poses[t].y;
    }
  }
  m.rowwise() -= m.colwise().mean();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sigma = svd.singularValues();
  const double total = sigma.sum();
  if (total <= 1e-12) return 1.0;
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double p = sigma(i) / total;
    if (p > 1e-15) entropy -= p * std::log(p);
  }
  return std::exp(entropy);
}

int endpoint_clusters(const std::vector<scene::Trajectory>& pool, double radius) {
  require_rectangular(pool, "endpoint_clusters");
  if (radius < 0.0) throw std::invalid_argument("endpoint_clusters: negative radius");
  return clusters_subset(pool, all_indices(pool.size()), radius);
}

QualityAwareStats quality_aware(const std::vector<scene::Trajectory>& pool,
                                const std::vector<double>& scores, double qualify_threshold,
                                int top_n) {
  require_rectangular(pool, "quality_aware");
  if (pool.size() != scores.size()) {
    throw std::invalid_argument("quality_aware: pool and score sizes differ");
  }
  if (top_n < 1) throw std::invalid_argument("quality_aware: top_n must be positive");

  QualityAwareStats out;
  std::vector<std::size_t> qualified;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= qualify_threshold) qualified.push_back(i);
  }
  out.qualified.count = static_cast<long>(qualified.size());
  out.qualified.empty = qualified.empty();
  if (!qualified.empty()) {
    const PairStats pair = pair_stats_subset(pool, qualified);
    out.qualified.ade = pair.ade;
    out.qualified.fde = pair.fde;
    for (std::size_t r = 0; r < kClusterRadii.size(); ++r) {
      out.qualified.clusters[r] = clusters_subset(pool, qualified, kClusterRadii[r]);
    }
  }

  std::vector<std::size_t> order = all_indices(pool.size());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(top_n)));
  std::sort(order.begin(), order.end());
  out.topn_count = static_cast<long>(order.size());
  const PairStats top_pair = pair_stats_subset(pool, order);
  out.topn_ade = top_pair.ade;
  out.topn_fde = top_pair.fde;
  return out;
}

std::vector<TopkRow> topk_tables(const std::vector<double>& true_scores,
                                 const std::vector<int>& order, const std::vector<int>& ks) {
  if (true_scores.empty() || order.empty()) {
    throw std::invalid_argument("topk_tables: empty inputs");
  }
  for (const int i : order) {
    if (i < 0 || static_cast<std::size_t>(i) >= true_scores.size()) {
      throw std::invalid_argument("topk_tables: order index out of range");
    }
  }
  std::vector<TopkRow> rows;
  for (const int k : ks) {
    if (k < 1) throw std::invalid_argument("topk_tables: k must be positive");
    TopkRow row;
    row.k = k;
    const std::size_t n = std::min<std::size_t>(order.size(), static_cast<std::size_t>(k));
    double best = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = true_scores[static_cast<std::size_t>(order[i])];
      best = std::max(best, s);
      acc += s;
    }
    row.oracle = best;
    row.mean = acc / static_cast<double>(n);
    rows.push_back(row);
  }
  return rows;
}

PoolStats compute_pool_stats(const std::string& scene_id,
                             const std::vector<scene::Trajectory>& pool,
                             const std::vector<double>& true_scores,
                             const std::vector<int>& order) {
  if (pool.empty() || pool.size() != true_scores.size() || order.empty()) {
    throw std::invalid_argument("compute_pool_stats: inconsistent inputs");
  }
  PoolStats s;
  s.scene_id = scene_id;
  s.pool_size = static_cast<long>(pool.size());
  s.selected_pdms = true_scores[static_cast<std::size_t>(order.front())];
  s.oracle_at_64 = *std::max_element(true_scores.begin(), true_scores.end());
  s.gap = s.oracle_at_64 - s.selected_pdms;
  double mean = 0.0;
  for (const double v : true_scores) mean += v;
  mean /= static_cast<double>(true_scores.size());
  double var = 0.0;
  for (const double v : true_scores) var += (v - mean) * (v - mean);
  s.mean_pdms = mean;
  s.std_pdms = std::sqrt(var / static_cast<double>(true_scores.size()));
  for (const double v : true_scores) {
    if (v > 0.95) ++s.count_above_095;
    if (v > 0.90) ++s.count_above_090;
    if (v < 0.50) ++s.count_below_050;
  }
  s.pairwise = pairwise_ade_fde(pool);
  s.spread = endpoint_spread(pool);
  s.eff_rank = effective_rank(pool);
  for (std::size_t r = 0; r < kClusterRadii.size(); ++r) {
    s.cluster_counts[r] = endpoint_clusters(pool, kClusterRadii[r]);
  }
  s.quality = quality_aware(pool, true_scores);
  s.topk = topk_tables(true_scores, order);
  return s;
}

std::vector<std::string> pool_stats_header() {
  std::vector<std::string> h{
      "scene_id",        "pool_size",        "selected_pdms",  "oracle_at_64",
      "gap",             "mean_pdms",        "std_pdms",       "count_above_095",
      "count_above_090", "count_below_050",  "pairwise_ade",   "pairwise_fde",
      "pairwise_degenerate", "endpoint_std_radius", "endpoint_area", "effective_rank"};
  for (const double r : kClusterRadii) {
    h.push_back("clusters_r" + std::to_string(static_cast<int>(r)));
  }
  h.insert(h.end(), {"qualified_count", "qualified_empty", "qualified_ade", "qualified_fde"});
  for (const double r : kClusterRadii) {
    h.push_back("qualified_clusters_r" + std::to_string(static_cast<int>(r)));
  }
  h.insert(h.end(), {"top6_count", "top6_ade", "top6_fde"});
  for (const int k : {1, 2, 3, 6}) h.push_back("topk_oracle_" + std::to_string(k));
  for (const int k : {1, 2, 3, 6}) h.push_back("topk_mean_" + std::to_string(k));
  return h;
}

std::vector<double> pool_stats_values(const PoolStats& s) {
  std::vector<double> v{static_cast<double>(s.pool_size),
                        s.selected_pdms,
                        s.oracle_at_64,
                        s.gap,
                        s.mean_pdms,
                        s.std_pdms,
                        static_cast<double>(s.count_above_095),
                        static_cast<double>(s.count_above_090),
                        static_cast<double>(s.count_below_050),
                        s.pairwise.ade,
                        s.pairwise.fde,
                        s.pairwise.degenerate ? 1.0 : 0.0,
                        s.spread.std_radius,
                        s.spread.area,
                        s.eff_rank};
  for (const int c : s.cluster_counts) v.push_back(static_cast<double>(c));
  v.push_back(static_cast<double>(s.quality.qualified.count));
  v.push_back(s.quality.qualified.empty ? 1.0 : 0.0);
  v.push_back(s.quality.qualified.ade);
  v.push_back(s.quality.qualified.fde);
  for (const int c : s.quality.qualified.clusters) v.push_back(static_cast<double>(c));
  v.push_back(static_cast<double>(s.quality.topn_count));
  v.push_back(s.quality.topn_ade);
  v.push_back(s.quality.topn_fde);
  for (const TopkRow& row : s.topk) v.push_back(row.oracle);
  for (const TopkRow& row : s.topk) v.push_back(row.mean);
  return v;
}

void write_pool_stats_csv(const std::filesystem::path& path,
                          const std::vector<PoolStats>& rows) {
  if (rows.empty()) throw std::invalid_argument("write_pool_stats_csv: no rows");
  std::vector<std::string> lines;
  lines.push_back(util::csv_join(pool_stats_header()));
  std::vector<double> sums;
  for (const PoolStats& s : rows) {
    const std::vector<double> values = pool_stats_values(s);
    if (sums.empty()) sums.assign(values.size(), 0.0);
    std::vector<std::string> cells{s.scene_id};
    for (std::size_t i = 0; i < values.size(); ++i) {
      sums[i] += values[i];
      cells.push_back(util::format_double(values[i]));
    }
    lines.push_back(util::csv_join(cells));
  }
  std::vector<std::string> agg{"aggregate"};
  for (const double total : sums) {
    agg.push_back(util::format_double(total / static_cast<double>(rows.size())));
  }
  lines.push_back(util::csv_join(agg));
  std::string body;
  for (const std::string& line : lines) {
    body += line;
    body += '\n';
  }
  util::write_file_atomic(path, body);
}

}  // namespace clover::analytics
