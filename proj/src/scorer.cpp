#include "clover/scorer.hpp"

#include <algorithm>
#include <stdexcept>

#include "clover/jsonio.hpp"
#include "clover/rng.hpp"

namespace clover::ranking {

eval::SubScores OracleScorer::predict(const scene::Scene& scene, const scene::Trajectory& traj,
                                      int) {
  return eval::compute_subscores(scene, traj, cfg_);
}

eval::SubScores NoisyScorer::predict(const scene::Scene& scene, const scene::Trajectory& traj,
                                     int candidate_index) {
  eval::SubScores s = eval::compute_subscores(scene, traj, cfg_);
  if (epsilon_ == 0.0 && p_flip_ == 0.0) return s;
  util::Rng rng(util::sub_seed(seed_, scene.id, static_cast<std::uint64_t>(candidate_index)));
  for (std::size_t i = 0; i < eval::SubScores::kCount; ++i) {
    if (eval::subscore_is_discrete(i)) {
      if (rng.bernoulli(p_flip_)) {
        const std::vector<double>& levels = eval::subscore_levels(i);
        // Pick uniformly among the other admissible levels.
        std::vector<double> others;
        for (const double v : levels) {
          if (v != s.get(i)) others.push_back(v);
        }
        if (!others.empty()) {
          s.set(i, others[static_cast<std::size_t>(
                       rng.uniform_int(0, static_cast<int>(others.size()) - 1))]);
        }
      }
    } else if (epsilon_ > 0.0) {
      s.set(i, std::clamp(s.get(i) + rng.uniform(-epsilon_, epsilon_), 0.0, 1.0));
    }
  }
  return s;
}

TabularScorer TabularScorer::from_jsonl(const std::filesystem::path& path) {
  TabularScorer scorer;
  for (const nlohmann::json& j : util::read_jsonl(path)) {
    const eval::ScoredRow row = eval::scored_row_from_json(j);
    scorer.table_[row.scene_id].push_back(row.scores);
  }
  return scorer;
}

eval::SubScores TabularScorer::predict(const scene::Scene& scene, const scene::Trajectory&,
                                       int candidate_index) {
  auto it = table_.find(scene.id);
  if (it == table_.end()) {
    throw std::invalid_argument("tabular scorer: no records for scene '" + scene.id + "'");
  }
  if (candidate_index < 0 || candidate_index >= static_cast<int>(it->second.size())) {
    throw std::invalid_argument("tabular scorer: candidate index " +
                                std::to_string(candidate_index) + " out of range for scene '" +
                                scene.id + "'");
  }
  return it->second[static_cast<std::size_t>(candidate_index)];
}

}  // namespace clover::ranking
