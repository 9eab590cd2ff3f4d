#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "clover/trajectory.hpp"

namespace clover::analytics {

struct PairStats {
  double ade = 0.0;
  double fde = 0.0;
  bool degenerate = false;
};

PairStats pairwise_ade_fde(const std::vector<scene::Trajectory>& pool);

struct EndpointSpread {
  double std_radius = 0.0;
  double area = 0.0;
};

EndpointSpread endpoint_spread(const std::vector<scene::Trajectory>& pool);

double effective_rank(const std::vector<scene::Trajectory>& pool);

int endpoint_clusters(const std::vector<scene::Trajectory>& pool, double radius);

inline constexpr std::array<double, 4> kClusterRadii{1.0, 2.0, 3.0, 4.0};

struct SubsetMetrics {
  long count = 0;
  bool empty = true;
  double ade = 0.0;
  double fde = 0.0;
  std::array<int, 4> clusters{0, 0, 0, 0};
};

struct QualityAwareStats {
  SubsetMetrics qualified;
  long topn_count = 0;
  double topn_ade = 0.0;
  double topn_fde = 0.0;
};

QualityAwareStats quality_aware(const std::vector<scene::Trajectory>& pool,
                                const std::vector<double>& scores,
                                double qualify_threshold = 0.8, int top_n = 6);

struct TopkRow {
  int k = 0;
  double oracle = 0.0;
  double mean = 0.0;
};

std::vector<TopkRow> topk_tables(const std::vector<double>& true_scores,
                                 const std::vector<int>& order,
                                 const std::vector<int>& ks = {1, 2, 3, 6});

struct PoolStats {
  std::string scene_id;
  long pool_size = 0;
  double selected_pdms = 0.0;
  double oracle_at_64 = 0.0;
  double gap = 0.0;
  double mean_pdms = 0.0;
  double std_pdms = 0.0;
  long count_above_095 = 0;
  long count_above_090 = 0;
  long count_below_050 = 0;
  PairStats pairwise;
  EndpointSpread spread;
  double eff_rank = 1.0;
  std::array<int, 4> cluster_counts{0, 0, 0, 0};
  QualityAwareStats quality;
  std::vector<TopkRow> topk;
};

PoolStats compute_pool_stats(const std::string& scene_id,
                             const std::vector<scene::Trajectory>& pool,
                             const std::vector<double>& true_scores,
                             const std::vector<int>& order);

std::vector<std::string> pool_stats_header();
std::vector<double> pool_stats_values(const PoolStats& stats);
void write_pool_stats_csv(const std::filesystem::path& path,
                          const std::vector<PoolStats>& rows);

}  // namespace clover::analytics
