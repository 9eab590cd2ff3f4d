#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clover/scene.hpp"
#include "clover/subscores.hpp"
#include "clover/trajectory.hpp"

namespace clover::eval {

// Thresholds and vehicle geometry for the rule-based metric checks. Defaults
// follow the documented evaluation protocol.
struct EvaluatorConfig {
  scene::VehicleDims dims{};
  double accel_max = 2.4;          // m/s^2
  double jerk_max = 4.0;           // m/s^3
  double yaw_rate_max = 0.5;       // rad/s
  double lane_half_width = 1.75;   // m, lane-keeping band
  double ttc_horizon = 1.0;        // s, constant-velocity projection window
  double reverse_tolerance = 2.0;  // m, reverse motion below this scores 0.5
  double ep_min_human_gain = 0.1;  // m, floor for the progress denominator
  double ec_pos_rms_max = 0.5;     // m, two-frame consistency position gate
  double ec_head_rms_max = 0.1;    // rad, two-frame consistency heading gate
};

// Rule-based metric evaluation of one trajectory against the scene:
//   NC       0 on any overlap with a moving obstacle, 0.5 when only static
//            objects are contacted, else 1
//   DAC      1 iff all four footprint corners stay inside the drivable union
//   DDC      1 iff projected station never decreases; 0.5 when total reverse
//            motion stays under reverse_tolerance; else 0
//   TLC      1 iff no pose position enters the traffic-light zone
//   EP       clamp(station gain / max(human station gain, floor), 0, 1)
//   TTC      1 iff a constant-velocity forward projection (half and full
//            horizon) stays clear of the obstacles at each step
//   LK       1 iff |lateral offset| <= lane_half_width at every pose
//   Comfort  1 iff finite-difference |accel|, |jerk|, |yaw rate| all stay
//            within bounds (the ego state seeds the difference stencils)
//   HC       the comfort rule (history included via the ego entry state)
//   EC       two-frame consistency when a previous frame is given, else 1
SubScores compute_subscores(const scene::Scene& scene, const scene::Trajectory& traj,
                            const EvaluatorConfig& cfg,
                            const scene::Trajectory* prev_frame = nullptr);

// Two-frame consistency: compares the overlapping poses of consecutive
// planning frames (previous frame shifted by one step) and scores 1 iff the
// RMS position and RMS wrapped-heading deviations stay within the gates.
double extended_comfort(const scene::Trajectory& prev_frame, const scene::Trajectory& cur_frame,
                        const EvaluatorConfig& cfg);

// Human reference scores for filtering: the scene table when present (missing
// metrics default to 1), otherwise all-ones.
SubScores resolve_human_subscores(const scene::Scene& scene);

// Evaluates a batch of trajectories. jobs > 1 runs the OpenMP kernel; the
// result is identical to the serial path.
std::vector<SubScores> evaluate_batch(const scene::Scene& scene,
                                      const std::vector<scene::Trajectory>& trajs,
                                      const EvaluatorConfig& cfg, int jobs = 1);

// One scored record, the JSONL row format shared by the score command and the
// candidate pipeline.
struct ScoredRow {
  std::string scene_id;
  std::string candidate_id;
  SubScores scores;
  double pdms = 0.0;
  double epdms = 0.0;
};

nlohmann::json scored_row_to_json(const ScoredRow& row);
ScoredRow scored_row_from_json(const nlohmann::json& j);

// Keyed by (scene id, trajectory content hash); reused across runs so
// unchanged trajectories are not re-evaluated.
class ScoreCache {
 public:
  ScoreCache() = default;

  static ScoreCache load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::optional<SubScores> lookup(const std::string& scene_id, std::uint64_t traj_hash) const;
  void insert(const std::string& scene_id, std::uint64_t traj_hash, const SubScores& scores);

  std::size_t size() const { return entries_.size(); }
  std::size_t hits() const { return hits_; }

 private:
  std::map<std::pair<std::string, std::uint64_t>, SubScores> entries_;
  mutable std::size_t hits_ = 0;
};

}  // namespace clover::eval
