#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clover/evaluator.hpp"
#include "clover/scene.hpp"
#include "clover/subscores.hpp"
#include "clover/trajectory.hpp"

namespace clover::pe {

enum class Family {
  kLateralTransition,
  kOffRoad,
  kAccelProfile,
  kStopGo,
  kApproachBrake,
  kOvershoot,
};
constexpr std::size_t kFamilyCount = 6;
const char* family_name(Family f);

// Grid definitions and pipeline knobs. Defaults reproduce the documented
// generation recipe: 200 + 12 + 18 + 9 + 10 + 12 = 261 candidates.
struct FamilyConfig {
  std::vector<double> speeds = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 15.0};
  std::vector<double> regular_laterals = {-3.5, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.5};
  std::vector<double> offroad_laterals = {-7.0, -5.5, 5.5, 7.0};
  std::vector<double> portions = {0.35, 0.6, 1.0};
  std::vector<double> accels = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  std::vector<double> accel_base_offsets = {-2.0, 0.0, 2.0};
  std::vector<double> stopgo_fractions = {0.25, 0.375, 0.5};
  std::vector<int> brake_start_steps = {2, 3, 4, 5, 6};
  std::vector<double> brake_decels = {-2.0, -1.0};
  std::vector<double> overshoot_laterals = {-2.0, -1.0, 1.0, 2.0};
  double overshoot_factor = 0.3;

  int target_lateral = 200;
  int target_offroad = 12;
  int target_accel = 18;
  int target_stopgo = 9;
  int target_brake = 10;
  int target_overshoot = 12;

  int max_scored = 180;
  int pool_keep = 50;
  std::vector<double> score_bins = {0.0, 0.2, 0.4, 0.6, 0.8, 1.01};
  std::vector<double> progress_bins = {0.0, 0.2, 0.5, 0.8, 1.01};

  double boundary_drop_threshold = 0.25;
  int boundary_max = 3;
  int boundary_samples = 1;

  double training_threshold = 0.8;
  int training_max = 8;
  double coverage_radius = 1.0;
  double heading_weight = 1.0;

  double max_speed = 15.0;
  double precheck_margin = 0.5;
  int precheck_offroad_limit = 2;
  bool drop_wrong_direction = true;
  double xy_limit = 100.0;

  int total_target() const {
    return target_lateral + target_offroad + target_accel + target_stopgo + target_brake +
           target_overshoot;
  }
};

// Generation parameters recorded per candidate; meaning varies by family
// (portion doubles as the stop fraction for stop-and-go, aux holds the brake
// onset step).
struct CandidateParams {
  double speed = 0.0;
  double lat_start = 0.0;
  double lat_end = 0.0;
  double portion = 1.0;
  double accel = 0.0;
  int aux = 0;
};

struct Candidate {
  int index = 0;
  Family family = Family::kLateralTransition;
  CandidateParams params;
  scene::Trajectory traj;
};

enum class Feasibility { kFeasible, kNearFeasible, kInfeasible };
const char* feasibility_name(Feasibility f);

struct ScoredCandidate {
  Candidate cand;
  eval::SubScores scores;
  double pdms = 0.0;
  double epdms = 0.0;
  Feasibility feasibility = Feasibility::kFeasible;
  bool interpolated = false;
};

// Quintic smoothstep 6r^5 - 15r^4 + 10r^3, clamped outside [0, 1]. Its first
// and second derivatives vanish at both endpoints.
double smooth_step(double r);

// Rolls a candidate out in route coordinates: stations accumulate the speed
// profile from the ego station, the lateral offset eases from lat_start to
// lat_end over the first `portion` of the horizon via smooth_step, and poses
// map back through the centerline frame.
scene::Trajectory build_candidate(const scene::Scene& scene,
                                  const std::vector<double>& speed_profile, double lat_start,
                                  double lat_end, double portion, double xy_limit = 100.0);

// As build_candidate but with an explicit per-step lateral profile.
scene::Trajectory build_candidate_profiles(const scene::Scene& scene,
                                           const std::vector<double>& speed_profile,
                                           const std::vector<double>& lateral_profile,
                                           double xy_limit = 100.0);

// Enumerates all six families on their grids and deterministically
// subsamples any family exceeding its target count (stratified round-robin
// over the family's leading grid axis, shuffled per stratum from the seed).
// Candidate indices are assigned in enumeration order.
std::vector<Candidate> generate_families(const scene::Scene& scene, const FamilyConfig& cfg,
                                         std::uint64_t seed);

// Geometry-only feasibility triage. Infeasible: any obstacle overlap or more
// than precheck_offroad_limit steps with off-drivable corners. Near-feasible:
// up to that many off-drivable steps, or any footprint within
// precheck_margin of an obstacle. Feasible otherwise.
Feasibility precheck(const scene::Scene& scene, const Candidate& cand, const FamilyConfig& cfg,
                     const eval::EvaluatorConfig& eval_cfg);

// Picks at most max_scored candidates to evaluate: all feasible first, then
// near-feasible, then a seeded sample of the infeasible remainder.
std::vector<int> select_for_scoring(const std::vector<Feasibility>& feasibility,
                                    const FamilyConfig& cfg, std::uint64_t seed);

// Greedy coverage-aware selection down to pool_keep. Each candidate is keyed
// by (DAC, collision flag, TTC, comfort, progress bin); the cost of picking
// candidate i is 10 * count(key_i among picked) + count(score bin of i among
// picked). Ties prefer higher pdms, then lower index.
std::vector<ScoredCandidate> coverage_select(const std::vector<ScoredCandidate>& scored,
                                             const FamilyConfig& cfg);

// Score-landscape refinement: within each (family, speed) group, sorted by
// lateral target, adjacent score gaps above boundary_drop_threshold spawn one
// midpoint candidate each (largest gaps first, at most boundary_max overall).
std::vector<ScoredCandidate> boundary_interpolate(const scene::Scene& scene,
                                                  const std::vector<ScoredCandidate>& kept,
                                                  const FamilyConfig& cfg,
                                                  const eval::EvaluatorConfig& eval_cfg,
                                                  const eval::SubScores& human_scores);

// Up to training_max trajectories for distillation: candidates scoring at
// least training_threshold, ordered by score, then spread by farthest-point
// sampling (mean per-pose L1 distance) seeded at the best one. The human
// trajectory is appended when it sits outside the selected set's coverage
// radius; an empty pool falls back to the human alone.
struct TrainingSample {
  std::vector<scene::Trajectory> experts;
  std::vector<int> sources;  // candidate index, or -1 for the human trajectory
  bool human_fallback = false;
};
TrainingSample training_sample(const std::vector<ScoredCandidate>& pool,
                               const scene::Trajectory& human, const FamilyConfig& cfg);

// Full per-scene pipeline: generate, triage, score, select, interpolate,
// sample.
struct PipelineResult {
  std::vector<Candidate> generated;
  std::vector<Feasibility> feasibility;
  std::vector<int> scored_indices;
  std::vector<ScoredCandidate> scored;
  std::vector<ScoredCandidate> kept;
  std::vector<ScoredCandidate> boundary_extras;
  TrainingSample training;
};
PipelineResult run_pipeline(const scene::Scene& scene, const FamilyConfig& cfg,
                            const eval::EvaluatorConfig& eval_cfg, std::uint64_t seed,
                            int jobs = 1);

// Serialization: scored-candidate JSONL rows and the padded expert-set
// document (experts as M x T x [x, y, heading] with a validity mask).
nlohmann::json scored_candidate_to_json(const scene::Scene& scene, const ScoredCandidate& sc);
nlohmann::json training_sample_to_json(const scene::Scene& scene, const TrainingSample& ts,
                                       int training_max);

}  // namespace clover::pe
