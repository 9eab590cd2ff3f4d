#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace clover::eval {

// The ten per-trajectory metric values. Rule-based evaluation produces values
// on the documented grids; learned or noisy predictors may emit any value in
// [0, 1] per component.
struct SubScores {
  double nc = 1.0;       // no collision at fault: 0, 0.5 (static only), 1
  double dac = 1.0;      // drivable-area compliance: 0, 1
  double ddc = 1.0;      // driving-direction compliance: 0, 0.5, 1
  double tlc = 1.0;      // traffic-light compliance: 0, 1
  double ep = 1.0;       // ego progress, continuous in [0, 1]
  double ttc = 1.0;      // time-to-collision margin: 0, 1
  double lk = 1.0;       // lane keeping: 0, 1
  double hc = 1.0;       // history comfort: 0, 1
  double ec = 1.0;       // extended comfort (two-frame consistency): 0, 1
  double comfort = 1.0;  // kinematic comfort: 0, 1

  static constexpr std::size_t kCount = 10;
  static const std::array<const char*, kCount>& names();

  double get(std::size_t index) const;
  void set(std::size_t index, double value);
  std::array<double, kCount> as_array() const;
};

// True when the component takes values from a discrete grid (every component
// except ego progress).
bool subscore_is_discrete(std::size_t index);

// The admissible grid for a discrete component.
const std::vector<double>& subscore_levels(std::size_t index);

// Throws std::invalid_argument when any component leaves [0, 1].
void validate_subscores(const SubScores& s, const std::string& context);

SubScores subscores_from_map(const std::map<std::string, double>& table);
std::map<std::string, double> subscores_to_map(const SubScores& s);

// Weighted composition recipe: a product over gated metrics times a weighted
// average over the remaining ones. The three presets differ in which gates
// are active and which metrics enter the average.
struct ScoreWeights {
  bool gate_nc = true;
  bool gate_dac = true;
  bool gate_ddc = false;
  bool gate_tlc = false;
  double w_ep = 5.0;
  double w_ttc = 5.0;
  double w_comfort = 2.0;
  double w_lk = 0.0;
  double w_hc = 0.0;
  double w_ec = 0.0;

  // Gates NC and DAC; average weights EP 5, TTC 5, Comfort 2.
  static ScoreWeights pdms_v1();
  // Gates NC, DAC, DDC, TLC; average weights TTC 5, EP 5, LK 2, HC 2, EC 2.
  static ScoreWeights epdms_v2();
  // Ranking weight vector used when composing predicted sub-scores:
  // NC 1, DAC 1, DDC 0, TTC 5, EP 5, Comfort 2.
  static ScoreWeights deployment();

  double weight_sum() const { return w_ep + w_ttc + w_comfort + w_lk + w_hc + w_ec; }
};

// Product of gated metrics times the normalized weighted average.
double compose_weighted(const SubScores& s, const ScoreWeights& w);

// nc * dac * (5 ep + 5 ttc + 2 comfort) / 12.
double compose_pdms(const SubScores& s);

// Human-conditioned filtering: a metric the human driver also fails (value 0)
// is forgiven and contributes 1.0; otherwise the agent value passes through.
double filter_subscore(double agent_value, double human_value);

// Filtered product over {NC, DAC, DDC, TLC} times the filtered weighted
// average over {TTC, EP, LK, HC, EC} with weights 5/5/2/2/2.
double compose_epdms(const SubScores& agent, const SubScores& human);

// As compose_epdms but with configurable gates and weights.
double compose_filtered(const SubScores& agent, const SubScores& human, const ScoreWeights& w);

// Combines a first-stage trajectory score with follow-up stage scores using
// Gaussian distance weights w_i proportional to exp(-d_i^2 / (2 sigma^2)),
// normalized over the follow-ups. No follow-ups leaves the stage-1 score
// unchanged.
struct FollowUp {
  double distance = 0.0;
  double score = 0.0;
};
double two_stage_aggregate(double stage1_score, const std::vector<FollowUp>& followups,
                           double sigma = 2.0);

// Squared error per component plus their mean, the surrogate training target
// for a learned score head.
struct CriticLoss {
  std::array<double, SubScores::kCount> per_component{};
  double total = 0.0;
};
CriticLoss critic_loss(const SubScores& predicted, const SubScores& target);

}  // namespace clover::eval
