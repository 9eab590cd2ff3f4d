#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "clover/evaluator.hpp"
#include "clover/scene.hpp"
#include "clover/subscores.hpp"

namespace clover::ranking {

// Predicts per-trajectory sub-scores for a scene's candidate pool. The
// candidate index identifies the item within the pool so replay- and
// noise-based scorers stay schedule-independent.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual eval::SubScores predict(const scene::Scene& scene, const scene::Trajectory& traj,
                                  int candidate_index) = 0;
  virtual std::string name() const = 0;
};

// Ground truth: delegates to the rule-based evaluator.
class OracleScorer : public Scorer {
 public:
  explicit OracleScorer(eval::EvaluatorConfig cfg) : cfg_(cfg) {}
  eval::SubScores predict(const scene::Scene& scene, const scene::Trajectory& traj,
                          int candidate_index) override;
  std::string name() const override { return "oracle"; }

 private:
  eval::EvaluatorConfig cfg_;
};

// Ground truth plus seeded noise: the continuous progress component gets
// uniform noise bounded by epsilon (clamped to [0, 1]); discrete components
// flip to a different admissible level with probability p_flip. Noise is
// drawn from (seed, scene id, candidate index), so results do not depend on
// evaluation order. epsilon = 0 and p_flip = 0 reproduce the oracle exactly.
class NoisyScorer : public Scorer {
 public:
  NoisyScorer(eval::EvaluatorConfig cfg, double epsilon, double p_flip, std::uint64_t seed)
      : cfg_(cfg), epsilon_(epsilon), p_flip_(p_flip), seed_(seed) {}
  eval::SubScores predict(const scene::Scene& scene, const scene::Trajectory& traj,
                          int candidate_index) override;
  std::string name() const override { return "noisy"; }

 private:
  eval::EvaluatorConfig cfg_;
  double epsilon_;
  double p_flip_;
  std::uint64_t seed_;
};

// Replays recorded predictions: row i of a scene's records corresponds to
// candidate index i of the replayed pool.
class TabularScorer : public Scorer {
 public:
  static TabularScorer from_jsonl(const std::filesystem::path& path);
  eval::SubScores predict(const scene::Scene& scene, const scene::Trajectory& traj,
                          int candidate_index) override;
  std::string name() const override { return "tabular"; }

 private:
  std::map<std::string, std::vector<eval::SubScores>> table_;
};

}  // namespace clover::ranking
