#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clover/distribution.hpp"

namespace clover::sim {

// One enrichment round: the next proposal distribution is the exact mixture
// (1 - alpha) * mu + alpha * nu followed by a total-variation perturbation of
// at most eta (adversarial mode drains mass from the best items toward the
// worst one; random mode moves seeded random mass).
struct EnrichmentStepConfig {
  double alpha = 0.5;
  double eta = 0.0;
  double r_high = 0.95;
  bool adversarial = true;
  std::uint64_t seed = 0;
};

// Verdict for one verified inequality: value >= lower_bound within tolerance.
struct BoundReport {
  double before = 0.0;       // p_t, or the expected score E_t
  double target = 0.0;       // the same quantity under nu
  double after = 0.0;        // realized value at t+1
  double gain = 0.0;         // xi = target - before (or beta for expectations)
  double alpha = 0.0;
  double eta = 0.0;
  double lower_bound = 0.0;  // before + alpha * gain - eta
  double slack = 0.0;        // after - lower_bound
  bool satisfied = false;
};

struct EnrichmentStepResult {
  DiscreteProposalDistribution next;
  BoundReport report;
};

// Verifies p_{t+1} >= p_t + alpha * xi - eta on the high-score mass.
EnrichmentStepResult enrichment_step(const DiscreteProposalDistribution& mu,
                                     const DiscreteProposalDistribution& nu,
                                     const EnrichmentStepConfig& cfg);

// Same machinery on expected scores: E_{t+1} >= E_t + alpha * beta - eta.
EnrichmentStepResult expected_score_step(const DiscreteProposalDistribution& mu,
                                         const DiscreteProposalDistribution& nu,
                                         const EnrichmentStepConfig& cfg);

// Iterates expected_score_step with a per-round target selector and verifies
// the telescoped bound E_T >= E_0 + sum(alpha * beta_t) - sum(eta). The
// guarantee is flagged vacuous when the accumulated gain does not exceed the
// accumulated perturbation.
using TargetSelector =
    std::function<DiscreteProposalDistribution(const DiscreteProposalDistribution&, int round)>;
struct MultiRoundResult {
  std::vector<BoundReport> rounds;
  double initial = 0.0;
  double final_value = 0.0;
  double cumulative_lower = 0.0;
  bool satisfied = false;
  bool vacuous = false;
};
MultiRoundResult multi_round(const DiscreteProposalDistribution& mu0,
                             const TargetSelector& selector, const EnrichmentStepConfig& cfg,
                             int rounds);

// Probability that K independent draws contain at least one high-score item:
// A_K(p) = 1 - (1 - p)^K.
double oracle_at_k(double p, int k);

// Guaranteed oracle value r_min + (r_high - r_min) * A_K(p).
double oracle_lower_bound(double p, int k, double r_min, double r_high);

// A policy with both true scores and surrogate (perturbed) scores per item.
struct SurrogatePolicy {
  std::vector<double> probs;
  std::vector<double> true_scores;
  std::vector<double> surrogate_scores;
};

// Verifies the surrogate-improvement chain: when the surrogate objective does
// not regress by more than alpha_t and the surrogate error stays within
// eps on both policies, the true objective obeys
//   J(after) >= J(before) - 2 * eps - alpha_t.
struct MonotonicityReport {
  double j_true_before = 0.0;
  double j_true_after = 0.0;
  double j_surr_before = 0.0;
  double j_surr_after = 0.0;
  double surrogate_gain = 0.0;  // m_t
  double lower_bound = 0.0;
  double slack = 0.0;
  bool premise_ok = false;      // surrogate errors within eps and m_t >= -alpha_t
  bool satisfied = false;
};
MonotonicityReport monotonicity_check(const SurrogatePolicy& before,
                                      const SurrogatePolicy& after, double eps, double alpha_t);

// Scorer-refit-vs-drift simulation. The proposal distribution drifts by
// exactly rho per round (mass conveyed to a fresh item, drained oldest
// first); a refit scorer errs by eps on the current distribution while a
// frozen scorer keeps its round-0 error profile. Off-fit items carry the
// worst-case error (0.4, attainable inside [0, 1] for the jittered scores).
// Cumulative absolute-error series are checked against the bounds
// T * (eps + rho) and T * eps + rho * T * (T + 1) / 2.
struct DriftResult {
  std::vector<double> refit_cumulative;  // entry t-1: rounds 1..t summed
  std::vector<double> fixed_cumulative;
  double refit_bound = 0.0;
  double fixed_bound = 0.0;
  bool refit_within = false;
  bool fixed_within = false;
};
DriftResult drift_experiment(int rounds, double eps, double rho, std::uint64_t seed);

// Least-squares slope of log(y) against log(x); inputs must be positive.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Perturbs true score vectors by at most delta per component, takes the
// perturbed Pareto front, and verifies containment in the true
// (2 delta + kappa)-approximate front. With lipschitz * coverage_eta > 0 a
// covering student (one more perturbation of that magnitude) is checked
// against the widened (2 delta + kappa + lipschitz * coverage_eta) front.
struct ParetoConsistencyResult {
  std::vector<int> scorer_front;
  int violations = 0;
  bool contained = false;
  bool coverage_checked = false;
  int coverage_violations = 0;
  bool coverage_contained = false;
};
ParetoConsistencyResult pareto_consistency_check(
    const std::vector<std::vector<double>>& true_vectors, double delta, double kappa,
    std::uint64_t seed, double lipschitz = 0.0, double coverage_eta = 0.0);

// Uniform-margin ranking trial: n_high items with true score r_high and n_low
// with r_low, scored with uniform error at most eps. With gamma = r_high -
// r_low > 2 eps every high item must outrank every low item.
struct MarginTrialReport {
  double gamma = 0.0;
  int violations = 0;
  bool premise_ok = false;  // gamma > 2 eps
  bool satisfied = false;
};
MarginTrialReport margin_trial(int n_high, int n_low, double r_high, double r_low, double eps,
                               std::uint64_t seed);

// Scorer-quality summary over recorded pools of (true score, predicted
// score) pairs.
struct ScenePool {
  std::string scene_id;
  std::vector<double> r_true;
  std::vector<double> s_pred;
};
struct PrecisionRow {
  double threshold = 0.0;
  long count = 0;
  double mean_true = 0.0;
  double frac_true_ge_090 = 0.0;
  double frac_true_full = 0.0;
};
struct EnrichmentReport {
  double pooled_full_rate = 0.0;
  std::vector<PrecisionRow> precision;
  double pairwise_accuracy = 0.0;  // high >= 0.95 vs low <= 0.50, within scenes
  long pairwise_pairs = 0;
  std::map<int, double> margin_rates;     // percentile -> fraction of scenes
  std::map<int, double> topk_mean_best;   // k -> mean best true score in top k
};
struct EnrichmentReportConfig {
  std::vector<double> precision_thresholds = {0.90, 0.95};
  double pair_high = 0.95;
  double pair_low = 0.50;
  std::vector<int> margin_percentiles = {75, 90, 95};
  double elite_quantile = 0.01;   // top mass defining the elite threshold
  double reject_quantile = 0.01;  // bottom mass defining the reject threshold
  std::vector<int> topk = {1, 8, 16};
};
EnrichmentReport enrichment_report(const std::vector<ScenePool>& pools,
                                   const EnrichmentReportConfig& cfg = {});

// Linear-interpolation quantile of a sample (q in [0, 1]).
double sample_quantile(std::vector<double> values, double q);

}  // namespace clover::sim
