#include "clover/run_config.hpp"

#include <cstdlib>
#include <set>
#include <stdexcept>

#include "clover/jsonio.hpp"

namespace clover::cli {

namespace {

// Consumes recognized keys from a section copy; whatever remains is unknown.
class Section {
 public:
  Section(const nlohmann::json& obj, std::string prefix)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) {
      throw std::invalid_argument("config: section '" + prefix_ + "' must be an object");
    }
  }

  template <typename T>
  void take(const char* key, T& out) {
    if (auto it = obj_.find(key); it != obj_.end()) {
      try {
        out = it->get<T>();
      } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("config: bad value type for '" + prefix_ + key + "'");
      }
      seen_.insert(key);
    }
  }

  nlohmann::json sub(const char* key) {
    if (auto it = obj_.find(key); it != obj_.end()) {
      seen_.insert(key);
      return *it;
    }
    return nlohmann::json::object();
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) {
        throw std::invalid_argument("config: unknown key '" + prefix_ + key + "'");
      }
    }
  }

 private:
  const nlohmann::json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void overlay_evaluator(eval::EvaluatorConfig& e, const nlohmann::json& obj) {
  Section s(obj, "evaluator.");
  s.take("vehicle_length", e.dims.length);
  s.take("vehicle_width", e.dims.width);
  s.take("accel_max", e.accel_max);
  s.take("jerk_max", e.jerk_max);
  s.take("yaw_rate_max", e.yaw_rate_max);
  s.take("lane_half_width", e.lane_half_width);
  s.take("ttc_horizon", e.ttc_horizon);
  s.take("reverse_tolerance", e.reverse_tolerance);
  s.take("ep_min_human_gain", e.ep_min_human_gain);
  s.take("ec_pos_rms_max", e.ec_pos_rms_max);
  s.take("ec_head_rms_max", e.ec_head_rms_max);
  s.finish();
}

void overlay_families(pe::FamilyConfig& f, const nlohmann::json& obj) {
  Section s(obj, "families.");
  s.take("speeds", f.speeds);
  s.take("regular_laterals", f.regular_laterals);
  s.take("offroad_laterals", f.offroad_laterals);
  s.take("portions", f.portions);
  s.take("accels", f.accels);
  s.take("accel_base_offsets", f.accel_base_offsets);
  s.take("stopgo_fractions", f.stopgo_fractions);
  s.take("brake_start_steps", f.brake_start_steps);
  s.take("brake_decels", f.brake_decels);
  s.take("overshoot_laterals", f.overshoot_laterals);
  s.take("overshoot_factor", f.overshoot_factor);
  s.take("target_lateral", f.target_lateral);
  s.take("target_offroad", f.target_offroad);
  s.take("target_accel", f.target_accel);
  s.take("target_stopgo", f.target_stopgo);
  s.take("target_brake", f.target_brake);
  s.take("target_overshoot", f.target_overshoot);
  s.take("max_scored", f.max_scored);
  s.take("pool_keep", f.pool_keep);
  s.take("score_bins", f.score_bins);
  s.take("progress_bins", f.progress_bins);
  s.take("boundary_drop_threshold", f.boundary_drop_threshold);
  s.take("boundary_max", f.boundary_max);
  s.take("boundary_samples", f.boundary_samples);
  s.take("training_threshold", f.training_threshold);
  s.take("training_max", f.training_max);
  s.take("coverage_radius", f.coverage_radius);
  s.take("heading_weight", f.heading_weight);
  s.take("max_speed", f.max_speed);
  s.take("precheck_margin", f.precheck_margin);
  s.take("precheck_offroad_limit", f.precheck_offroad_limit);
  s.take("drop_wrong_direction", f.drop_wrong_direction);
  s.take("xy_limit", f.xy_limit);
  s.finish();
}

void overlay_anchor(ranking::AnchorConfig& a, const nlohmann::json& obj) {
  Section s(obj, "anchor.");
  s.take("lambda_score", a.lambda_score);
  s.take("lambda_xy", a.lambda_xy);
  s.take("lambda_heading", a.lambda_heading);
  s.take("s_pos", a.s_pos);
  s.take("s_heading", a.s_heading);
  s.finish();
}

void overlay_stage1(ranking::Stage1Weights& w, const nlohmann::json& obj) {
  Section s(obj, "stage1.");
  s.take("lambda_gt", w.lambda_gt);
  s.take("lambda_pe", w.lambda_pe);
  s.finish();
}

void overlay_stage2(ranking::Stage2Weights& w, const nlohmann::json& obj) {
  Section s(obj, "stage2.");
  s.take("lambda_traj", w.lambda_traj);
  s.take("lambda_topk", w.lambda_topk);
  s.take("lambda_pareto", w.lambda_pareto);
  s.take("lambda_stab", w.lambda_stab);
  s.finish();
}

}  // namespace

eval::ScoreWeights resolve_score_weights(const std::string& name) {
  if (name == "pdms_v1") return eval::ScoreWeights::pdms_v1();
  if (name == "epdms_v2") return eval::ScoreWeights::epdms_v2();
  if (name == "deployment") return eval::ScoreWeights::deployment();
  throw std::invalid_argument("config: unknown score_weights preset '" + name + "'");
}

void apply_config_overlay(RunConfig& cfg, const nlohmann::json& overlay) {
  Section s(overlay, "");
  s.take("seed", cfg.seed);
  s.take("jobs", cfg.jobs);
  s.take("kernel_sigma", cfg.kernel_sigma);
  s.take("score_weights", cfg.score_weights);
  overlay_evaluator(cfg.evaluator, s.sub("evaluator"));
  overlay_families(cfg.families, s.sub("families"));
  overlay_anchor(cfg.anchor, s.sub("anchor"));
  overlay_stage1(cfg.stage1, s.sub("stage1"));
  overlay_stage2(cfg.stage2, s.sub("stage2"));
  s.finish();
  resolve_score_weights(cfg.score_weights);
  if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (cfg.kernel_sigma <= 0.0) throw std::invalid_argument("config: kernel_sigma must be > 0");
}

RunConfig load_run_config(const std::string& explicit_path) {
  RunConfig cfg;
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("CLOVER_LAB_CONFIG")) path = env;
  }
  if (!path.empty()) apply_config_overlay(cfg, util::read_json(path));
  return cfg;
}

nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["kernel_sigma"] = cfg.kernel_sigma;
  j["score_weights"] = cfg.score_weights;
  j["evaluator"] = {{"vehicle_length", cfg.evaluator.dims.length},
                    {"vehicle_width", cfg.evaluator.dims.width},
                    {"accel_max", cfg.evaluator.accel_max},
                    {"jerk_max", cfg.evaluator.jerk_max},
                    {"yaw_rate_max", cfg.evaluator.yaw_rate_max},
                    {"lane_half_width", cfg.evaluator.lane_half_width},
                    {"ttc_horizon", cfg.evaluator.ttc_horizon},
                    {"reverse_tolerance", cfg.evaluator.reverse_tolerance},
                    {"ep_min_human_gain", cfg.evaluator.ep_min_human_gain},
                    {"ec_pos_rms_max", cfg.evaluator.ec_pos_rms_max},
                    {"ec_head_rms_max", cfg.evaluator.ec_head_rms_max}};
  j["families"] = {{"speeds", cfg.families.speeds},
                   {"regular_laterals", cfg.families.regular_laterals},
                   {"offroad_laterals", cfg.families.offroad_laterals},
                   {"portions", cfg.families.portions},
                   {"accels", cfg.families.accels},
                   {"accel_base_offsets", cfg.families.accel_base_offsets},
                   {"stopgo_fractions", cfg.families.stopgo_fractions},
                   {"brake_start_steps", cfg.families.brake_start_steps},
                   {"brake_decels", cfg.families.brake_decels},
                   {"overshoot_laterals", cfg.families.overshoot_laterals},
                   {"overshoot_factor", cfg.families.overshoot_factor},
                   {"target_lateral", cfg.families.target_lateral},
                   {"target_offroad", cfg.families.target_offroad},
                   {"target_accel", cfg.families.target_accel},
                   {"target_stopgo", cfg.families.target_stopgo},
                   {"target_brake", cfg.families.target_brake},
                   {"target_overshoot", cfg.families.target_overshoot},
                   {"max_scored", cfg.families.max_scored},
                   {"pool_keep", cfg.families.pool_keep},
                   {"score_bins", cfg.families.score_bins},
                   {"progress_bins", cfg.families.progress_bins},
                   {"boundary_drop_threshold", cfg.families.boundary_drop_threshold},
                   {"boundary_max", cfg.families.boundary_max},
                   {"boundary_samples", cfg.families.boundary_samples},
                   {"training_threshold", cfg.families.training_threshold},
                   {"training_max", cfg.families.training_max},
                   {"coverage_radius", cfg.families.coverage_radius},
                   {"heading_weight", cfg.families.heading_weight},
                   {"max_speed", cfg.families.max_speed},
                   {"precheck_margin", cfg.families.precheck_margin},
                   {"precheck_offroad_limit", cfg.families.precheck_offroad_limit},
                   {"drop_wrong_direction", cfg.families.drop_wrong_direction},
                   {"xy_limit", cfg.families.xy_limit}};
  j["anchor"] = {{"lambda_score", cfg.anchor.lambda_score},
                 {"lambda_xy", cfg.anchor.lambda_xy},
                 {"lambda_heading", cfg.anchor.lambda_heading},
                 {"s_pos", cfg.anchor.s_pos},
                 {"s_heading", cfg.anchor.s_heading}};
  j["stage1"] = {{"lambda_gt", cfg.stage1.lambda_gt}, {"lambda_pe", cfg.stage1.lambda_pe}};
  j["stage2"] = {{"lambda_traj", cfg.stage2.lambda_traj},
                 {"lambda_topk", cfg.stage2.lambda_topk},
                 {"lambda_pareto", cfg.stage2.lambda_pareto},
                 {"lambda_stab", cfg.stage2.lambda_stab}};
  return j;
}

}  // namespace clover::cli
