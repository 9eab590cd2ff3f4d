#include "clover/subscores.hpp"

#include <cmath>
#include <stdexcept>

namespace clover::eval {

namespace {
constexpr std::array<const char*, SubScores::kCount> kNames = {
    "nc", "dac", "ddc", "tlc", "ep", "ttc", "lk", "hc", "ec", "comfort"};

const std::vector<double> kBinary = {0.0, 1.0};
const std::vector<double> kTernary = {0.0, 0.5, 1.0};
const std::vector<double> kContinuous = {};
}  // namespace

const std::array<const char*, SubScores::kCount>& SubScores::names() { return kNames; }

double SubScores::get(std::size_t index) const {
  switch (index) {
    case 0: return nc;
    case 1: return dac;
    case 2: return ddc;
    case 3: return tlc;
    case 4: return ep;
    case 5: return ttc;
    case 6: return lk;
    case 7: return hc;
    case 8: return ec;
    case 9: return comfort;
    default: throw std::out_of_range("SubScores::get: bad index");
  }
}

void SubScores::set(std::size_t index, double value) {
  switch (index) {
    case 0: nc = value; break;
    case 1: dac = value; break;
    case 2: ddc = value; break;
    case 3: tlc = value; break;
    case 4: ep = value; break;
    case 5: ttc = value; break;
    case 6: lk = value; break;
    case 7: hc = value; break;
    case 8: ec = value; break;
    case 9: comfort = value; break;
    default: throw std::out_of_range("SubScores::set: bad index");
  }
}

std::array<double, SubScores::kCount> SubScores::as_array() const {
  std::array<double, kCount> out{};
  for (std::size_t i = 0; i < kCount; ++i) out[i] = get(i);
  return out;
}

bool subscore_is_discrete(std::size_t index) { return index != 4; }

const std::vector<double>& subscore_levels(std::size_t index) {
  switch (index) {
    case 0:
    case 2:
      return kTernary;
    case 4:
      return kContinuous;
    default:
      return kBinary;
  }
}

void validate_subscores(const SubScores& s, const std::string& context) {
  for (std::size_t i = 0; i < SubScores::kCount; ++i) {
    const double v = s.get(i);
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument(context + ": sub-score '" + kNames[i] +
                                  "' outside [0, 1]");
    }
  }
}

SubScores subscores_from_map(const std::map<std::string, double>& table) {
  SubScores s;
  for (const auto& [key, value] : table) {
    bool known = false;
    for (std::size_t i = 0; i < SubScores::kCount; ++i) {
      if (key == kNames[i]) {
        s.set(i, value);
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("unknown sub-score name '" + key + "'");
  }
  return s;
}

std::map<std::string, double> subscores_to_map(const SubScores& s) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < SubScores::kCount; ++i) out[kNames[i]] = s.get(i);
  return out;
}

ScoreWeights ScoreWeights::pdms_v1() { return ScoreWeights{}; }

ScoreWeights ScoreWeights::epdms_v2() {
  ScoreWeights w;
  w.gate_nc = w.gate_dac = w.gate_ddc = w.gate_tlc = true;
  w.w_ep = 5.0;
  w.w_ttc = 5.0;
  w.w_comfort = 0.0;
  w.w_lk = 2.0;
  w.w_hc = 2.0;
  w.w_ec = 2.0;
  return w;
}

ScoreWeights ScoreWeights::deployment() {
  ScoreWeights w;
  w.gate_nc = w.gate_dac = true;
  w.gate_ddc = w.gate_tlc = false;
  w.w_ep = 5.0;
  w.w_ttc = 5.0;
  w.w_comfort = 2.0;
  w.w_lk = w.w_hc = w.w_ec = 0.0;
  return w;
}

double compose_weighted(const SubScores& s, const ScoreWeights& w) {
  const double denom = w.weight_sum();
  if (denom <= 0.0) throw std::invalid_argument("compose_weighted: weight sum must be positive");
  double product = 1.0;
  if (w.gate_nc) product *= s.nc;
  if (w.gate_dac) product *= s.dac;
  if (w.gate_ddc) product *= s.ddc;
  if (w.gate_tlc) product *= s.tlc;
  const double avg = (w.w_ep * s.ep + w.w_ttc * s.ttc + w.w_comfort * s.comfort +
                      w.w_lk * s.lk + w.w_hc * s.hc + w.w_ec * s.ec) /
                     denom;
  return product * avg;
}

double compose_pdms(const SubScores& s) { return compose_weighted(s, ScoreWeights::pdms_v1()); }

double filter_subscore(double agent_value, double human_value) {
  return human_value == 0.0 ? 1.0 : agent_value;
}

double compose_filtered(const SubScores& agent, const SubScores& human, const ScoreWeights& w) {
  SubScores filtered;
  for (std::size_t i = 0; i < SubScores::kCount; ++i) {
    filtered.set(i, filter_subscore(agent.get(i), human.get(i)));
  }
  return compose_weighted(filtered, w);
}

double compose_epdms(const SubScores& agent, const SubScores& human) {
  return compose_filtered(agent, human, ScoreWeights::epdms_v2());
}

double two_stage_aggregate(double stage1_score, const std::vector<FollowUp>& followups,
                           double sigma) {
  if (sigma <= 0.0) throw std::invalid_argument("two_stage_aggregate: sigma must be positive");
  if (followups.empty()) return stage1_score;
  double weight_sum = 0.0;
  double acc = 0.0;
  for (const FollowUp& f : followups) {
    const double w = std::exp(-f.distance * f.distance / (2.0 * sigma * sigma));
    weight_sum += w;
    acc += w * f.score;
  }
  return stage1_score * (acc / weight_sum);
}

CriticLoss critic_loss(const SubScores& predicted, const SubScores& target) {
  CriticLoss loss;
  double sum = 0.0;
  for (std::size_t i = 0; i < SubScores::kCount; ++i) {
    const double d = predicted.get(i) - target.get(i);
    loss.per_component[i] = d * d;
    sum += d * d;
  }
  loss.total = sum / static_cast<double>(SubScores::kCount);
  return loss;
}

}  // namespace clover::eval
