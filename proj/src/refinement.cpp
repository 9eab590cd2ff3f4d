#include "clover/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "clover/ranking.hpp"
#include "clover/rng.hpp"

namespace clover::sim {

namespace {

constexpr double kTol = 1e-12;

// Moves at most eta of total mass. Adversarial mode drains the best-scoring
// items into the single worst one, which realizes the worst case of the
// perturbation bounds; random mode shuffles seeded mass between random pairs.
void apply_tv_perturbation(DiscreteProposalDistribution& dist, double eta, bool adversarial,
                           std::uint64_t seed) {
  if (eta <= 0.0 || dist.size() < 2) return;
  if (adversarial) {
    std::size_t receiver = 0;
    for (std::size_t i = 1; i < dist.size(); ++i) {
      if (dist.scores[i] < dist.scores[receiver]) receiver = i;
    }
    std::vector<std::size_t> donors;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (i != receiver) donors.push_back(i);
    }
    std::sort(donors.begin(), donors.end(), [&](std::size_t a, std::size_t b) {
      if (dist.scores[a] != dist.scores[b]) return dist.scores[a] > dist.scores[b];
      return a < b;
    });
    double remaining = eta;
    for (const std::size_t d : donors) {
      if (remaining <= 0.0) break;
      const double take = std::min(dist.probs[d], remaining);
      dist.probs[d] -= take;
      dist.probs[receiver] += take;
      remaining -= take;
    }
  } else {
    util::Rng rng(seed);
    const int moves = 4;
    for (int m = 0; m < moves; ++m) {
      const std::size_t i =
          static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(dist.size()) - 1));
      const std::size_t j =
          static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(dist.size()) - 1));
      if (i == j) continue;
      const double take = std::min(dist.probs[i], eta / moves);
      dist.probs[i] -= take;
      dist.probs[j] += take;
    }
  }
}

void validate_step_config(const EnrichmentStepConfig& cfg) {
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0) {
    throw std::invalid_argument("enrichment step: alpha outside [0, 1]");
  }
  if (cfg.eta < 0.0) throw std::invalid_argument("enrichment step: eta must be non-negative");
}

void validate_policy(const SurrogatePolicy& policy, const char* who) {
  if (policy.probs.empty() || policy.probs.size() != policy.true_scores.size() ||
      policy.probs.size() != policy.surrogate_scores.size()) {
    throw std::invalid_argument(std::string(who) + ": inconsistent policy arrays");
  }
  double sum = 0.0;
  for (const double p : policy.probs) {
    if (p < 0.0) throw std::invalid_argument(std::string(who) + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kTol) {
    throw std::invalid_argument(std::string(who) + ": probabilities must sum to 1");
  }
}

}  // namespace

EnrichmentStepResult enrichment_step(const DiscreteProposalDistribution& mu,
                                     const DiscreteProposalDistribution& nu,
                                     const EnrichmentStepConfig& cfg) {
  validate_distribution(mu);
  validate_distribution(nu);
  validate_step_config(cfg);

  EnrichmentStepResult result;
  result.next = mix(mu, nu, cfg.alpha);
  apply_tv_perturbation(result.next, cfg.eta, cfg.adversarial, cfg.seed);

  BoundReport& r = result.report;
  r.before = high_score_mass(mu, cfg.r_high);
  r.target = high_score_mass(nu, cfg.r_high);
  r.after = high_score_mass(result.next, cfg.r_high);
  r.gain = r.target - r.before;
  r.alpha = cfg.alpha;
  r.eta = cfg.eta;
  r.lower_bound = r.before + cfg.alpha * r.gain - cfg.eta;
  r.slack = r.after - r.lower_bound;
  r.satisfied = r.slack >= -kTol;
  return result;
}

EnrichmentStepResult expected_score_step(const DiscreteProposalDistribution& mu,
                                         const DiscreteProposalDistribution& nu,
                                         const EnrichmentStepConfig& cfg) {
  validate_distribution(mu);
  validate_distribution(nu);
  validate_step_config(cfg);

  EnrichmentStepResult result;
  result.next = mix(mu, nu, cfg.alpha);
  apply_tv_perturbation(result.next, cfg.eta, cfg.adversarial, cfg.seed);

  BoundReport& r = result.report;
  r.before = expected_score(mu);
  r.target = expected_score(nu);
  r.after = expected_score(result.next);
  r.gain = r.target - r.before;
  r.alpha = cfg.alpha;
  r.eta = cfg.eta;
  r.lower_bound = r.before + cfg.alpha * r.gain - cfg.eta;
  r.slack = r.after - r.lower_bound;
  r.satisfied = r.slack >= -kTol;
  return result;
}

MultiRoundResult multi_round(const DiscreteProposalDistribution& mu0,
                             const TargetSelector& selector, const EnrichmentStepConfig& cfg,
                             int rounds) {
  if (rounds < 1) throw std::invalid_argument("multi_round: rounds must be positive");
  MultiRoundResult out;
  out.initial = expected_score(mu0);
  DiscreteProposalDistribution current = mu0;
  double gain_sum = 0.0;
  for (int t = 0; t < rounds; ++t) {
    EnrichmentStepConfig round_cfg = cfg;
    round_cfg.seed = util::sub_seed(cfg.seed, static_cast<std::uint64_t>(t));
    const DiscreteProposalDistribution target = selector(current, t);
    EnrichmentStepResult step = expected_score_step(current, target, round_cfg);
    gain_sum += cfg.alpha * step.report.gain;
    out.rounds.push_back(step.report);
    current = std::move(step.next);
  }
  out.final_value = expected_score(current);
  out.cumulative_lower = out.initial + gain_sum - cfg.eta * rounds;
  out.satisfied = out.final_value >= out.cumulative_lower - kTol;
  for (const BoundReport& r : out.rounds) out.satisfied = out.satisfied && r.satisfied;
  out.vacuous = gain_sum <= cfg.eta * rounds;
  return out;
}

double oracle_at_k(double p, int k) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("oracle_at_k: p outside [0, 1]");
  if (k < 1) throw std::invalid_argument("oracle_at_k: k must be positive");
  return 1.0 - std::pow(1.0 - p, k);
}

double oracle_lower_bound(double p, int k, double r_min, double r_high) {
  if (r_high < r_min) throw std::invalid_argument("oracle_lower_bound: r_high < r_min");
  return r_min + (r_high - r_min) * oracle_at_k(p, k);
}

MonotonicityReport monotonicity_check(const SurrogatePolicy& before,
                                      const SurrogatePolicy& after, double eps,
                                      double alpha_t) {
  validate_policy(before, "monotonicity_check(before)");
  validate_policy(after, "monotonicity_check(after)");
  if (eps < 0.0 || alpha_t < 0.0) {
    throw std::invalid_argument("monotonicity_check: eps and alpha_t must be non-negative");
  }

  auto expectation = [](const std::vector<double>& probs, const std::vector<double>& values) {
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) acc += probs[i] * values[i];
    return acc;
  };
  auto errors_bounded = [eps](const SurrogatePolicy& p) {
    for (std::size_t i = 0; i < p.probs.size(); ++i) {
      if (std::abs(p.surrogate_scores[i] - p.true_scores[i]) > eps + kTol) return false;
    }
    return true;
  };

  MonotonicityReport r;
  r.j_true_before = expectation(before.probs, before.true_scores);
  r.j_true_after = expectation(after.probs, after.true_scores);
  r.j_surr_before = expectation(before.probs, before.surrogate_scores);
  r.j_surr_after = expectation(after.probs, after.surrogate_scores);
  r.surrogate_gain = r.j_surr_after - r.j_surr_before;
  r.premise_ok =
      errors_bounded(before) && errors_bounded(after) && r.surrogate_gain >= -alpha_t - kTol;
  r.lower_bound = r.j_true_before - 2.0 * eps - alpha_t;
  r.slack = r.j_true_after - r.lower_bound;
  r.satisfied = !r.premise_ok || r.slack >= -kTol;
  return r;
}

DriftResult drift_experiment(int rounds, double eps, double rho, std::uint64_t seed) {
  if (rounds < 1) throw std::invalid_argument("drift_experiment: rounds must be positive");
  if (eps < 0.0 || eps > 0.4) {
    throw std::invalid_argument("drift_experiment: eps must lie in [0, 0.4]");
  }
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("drift_experiment: rho must lie in [0, 1]");
  }
  constexpr double kOffFitError = 0.4;

  // Mass conveyor: each round spawns a fresh item holding exactly rho mass,
  // drained from the oldest items alive. Total variation per round is rho.
  std::vector<double> mass{1.0};
  std::vector<int> born{0};
  util::Rng rng(seed);
  auto spawn = [&](int round) {
    mass.push_back(0.0);
    born.push_back(round);
    double need = rho;
    for (std::size_t i = 0; i + 1 < mass.size() && need > 0.0; ++i) {
      const double take = std::min(mass[i], need);
      mass[i] -= take;
      mass.back() += take;
      need -= take;
    }
    (void)rng;
  };

  DriftResult out;
  double refit_acc = 0.0;
  double fixed_acc = 0.0;
  for (int t = 0; t < rounds; ++t) {
    spawn(t + 1);
    double refit_err = 0.0;  // scorer refit on round t, evaluated on round t+1
    double fixed_err = 0.0;  // scorer fit on round 0, evaluated on round t+1
    for (std::size_t i = 0; i < mass.size(); ++i) {
      refit_err += mass[i] * (born[i] <= t ? eps : kOffFitError);
      fixed_err += mass[i] * (born[i] == 0 ? eps : kOffFitError);
    }
    refit_acc += refit_err;
    fixed_acc += fixed_err;
    out.refit_cumulative.push_back(refit_acc);
    out.fixed_cumulative.push_back(fixed_acc);
  }
  const double T = static_cast<double>(rounds);
  out.refit_bound = T * (eps + rho);
  out.fixed_bound = T * eps + rho * T * (T + 1.0) / 2.0;
  out.refit_within = out.refit_cumulative.back() <= out.refit_bound + 1e-9;
  out.fixed_within = out.fixed_cumulative.back() <= out.fixed_bound + 1e-9;
  return out;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0) {
      throw std::invalid_argument("loglog_slope: inputs must be positive");
    }
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(xs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ParetoConsistencyResult pareto_consistency_check(
    const std::vector<std::vector<double>>& true_vectors, double delta, double kappa,
    std::uint64_t seed, double lipschitz, double coverage_eta) {
  if (true_vectors.empty()) {
    throw std::invalid_argument("pareto_consistency_check: empty pool");
  }
  if (delta < 0.0 || kappa < 0.0) {
    throw std::invalid_argument("pareto_consistency_check: delta and kappa must be >= 0");
  }
  const std::size_t dims = true_vectors[0].size();

  std::vector<std::vector<double>> perturbed(true_vectors.size());
  for (std::size_t i = 0; i < true_vectors.size(); ++i) {
    if (true_vectors[i].size() != dims) {
      throw std::invalid_argument("pareto_consistency_check: ragged vectors");
    }
    util::Rng rng(util::sub_seed(seed, i));
    perturbed[i].resize(dims);
    for (std::size_t m = 0; m < dims; ++m) {
      perturbed[i][m] =
          std::clamp(true_vectors[i][m] + rng.uniform(-delta, delta), 0.0, 1.0);
    }
  }

  // i is eps-dominated when some j clears it by eps on every component.
  auto eps_dominated = [&](const std::vector<double>& v, double eps) {
    for (const std::vector<double>& other : true_vectors) {
      bool dominates = true;
      for (std::size_t m = 0; m < dims; ++m) {
        if (other[m] < v[m] + eps) {
          dominates = false;
          break;
        }
      }
      if (dominates) return true;
    }
    return false;
  };

  ParetoConsistencyResult out;
  out.scorer_front = ranking::pareto_front(perturbed);
  const double eps = 2.0 * delta + kappa;
  for (const int i : out.scorer_front) {
    if (eps_dominated(true_vectors[static_cast<std::size_t>(i)], eps)) ++out.violations;
  }
  out.contained = out.violations == 0;

  if (lipschitz > 0.0 && coverage_eta > 0.0) {
    out.coverage_checked = true;
    const double bound = lipschitz * coverage_eta;
    const double widened = eps + bound;
    for (const int i : out.scorer_front) {
      util::Rng rng(util::sub_seed(seed, 0x90000000ULL + static_cast<std::uint64_t>(i)));
      std::vector<double> student(dims);
      for (std::size_t m = 0; m < dims; ++m) {
        student[m] = std::clamp(
            true_vectors[static_cast<std::size_t>(i)][m] + rng.uniform(-bound, bound), 0.0,
            1.0);
      }
      if (eps_dominated(student, widened)) ++out.coverage_violations;
    }
    out.coverage_contained = out.coverage_violations == 0;
  }
  return out;
}

MarginTrialReport margin_trial(int n_high, int n_low, double r_high, double r_low, double eps,
                               std::uint64_t seed) {
  if (n_high < 1 || n_low < 1) throw std::invalid_argument("margin_trial: need both groups");
  if (eps < 0.0) throw std::invalid_argument("margin_trial: eps must be non-negative");
  MarginTrialReport out;
  out.gamma = r_high - r_low;
  out.premise_ok = out.gamma > 2.0 * eps;

  util::Rng rng(seed);
  std::vector<double> s_high(static_cast<std::size_t>(n_high));
  std::vector<double> s_low(static_cast<std::size_t>(n_low));
  for (double& s : s_high) s = std::clamp(r_high + rng.uniform(-eps, eps), 0.0, 1.0);
  for (double& s : s_low) s = std::clamp(r_low + rng.uniform(-eps, eps), 0.0, 1.0);
  for (const double h : s_high) {
    for (const double l : s_low) {
      if (h <= l) ++out.violations;
    }
  }
  out.satisfied = out.violations == 0;
  return out;
}

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("sample_quantile: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

EnrichmentReport enrichment_report(const std::vector<ScenePool>& pools,
                                   const EnrichmentReportConfig& cfg) {
  if (pools.empty()) throw std::invalid_argument("enrichment_report: no pools");
  EnrichmentReport out;

  long total = 0;
  long full = 0;
  for (const ScenePool& pool : pools) {
    if (pool.r_true.size() != pool.s_pred.size()) {
      throw std::invalid_argument("enrichment_report: pool '" + pool.scene_id +
                                  "' true/predicted size mismatch");
    }
    total += static_cast<long>(pool.r_true.size());
    for (const double r : pool.r_true) {
      if (r >= 1.0 - kTol) ++full;
    }
  }
  if (total == 0) throw std::invalid_argument("enrichment_report: empty pools");
  out.pooled_full_rate = static_cast<double>(full) / static_cast<double>(total);

  for (const double thr : cfg.precision_thresholds) {
    PrecisionRow row;
    row.threshold = thr;
    double sum = 0.0;
    long ge090 = 0;
    long eq1 = 0;
    for (const ScenePool& pool : pools) {
      for (std::size_t i = 0; i < pool.r_true.size(); ++i) {
        if (pool.s_pred[i] < thr) continue;
        ++row.count;
        sum += pool.r_true[i];
        if (pool.r_true[i] >= 0.90 - kTol) ++ge090;
        if (pool.r_true[i] >= 1.0 - kTol) ++eq1;
      }
    }
    if (row.count > 0) {
      row.mean_true = sum / static_cast<double>(row.count);
      row.frac_true_ge_090 = static_cast<double>(ge090) / static_cast<double>(row.count);
      row.frac_true_full = static_cast<double>(eq1) / static_cast<double>(row.count);
    }
    out.precision.push_back(row);
  }

  long pairs = 0;
  long correct = 0;
  for (const ScenePool& pool : pools) {
    std::vector<double> highs, lows;
    for (std::size_t i = 0; i < pool.r_true.size(); ++i) {
      if (pool.r_true[i] >= cfg.pair_high) highs.push_back(pool.s_pred[i]);
      if (pool.r_true[i] <= cfg.pair_low) lows.push_back(pool.s_pred[i]);
    }
    for (const double h : highs) {
      for (const double l : lows) {
        ++pairs;
        if (h > l) ++correct;
      }
    }
  }
  out.pairwise_pairs = pairs;
  out.pairwise_accuracy = pairs > 0 ? static_cast<double>(correct) / pairs : 0.0;

  // Per-scene margin between the elite and reject score quantiles, compared
  // against twice the chosen percentile of the absolute prediction error.
  for (const int pct : cfg.margin_percentiles) {
    long scenes = 0;
    long holds = 0;
    for (const ScenePool& pool : pools) {
      if (pool.r_true.size() < 2) continue;
      ++scenes;
      const double elite = sample_quantile(pool.r_true, 1.0 - cfg.elite_quantile);
      const double reject = sample_quantile(pool.r_true, cfg.reject_quantile);
      std::vector<double> errors(pool.r_true.size());
      for (std::size_t i = 0; i < pool.r_true.size(); ++i) {
        errors[i] = std::abs(pool.s_pred[i] - pool.r_true[i]);
      }
      const double eps_pct = sample_quantile(errors, pct / 100.0);
      if (elite - reject > 2.0 * eps_pct) ++holds;
    }
    out.margin_rates[pct] = scenes > 0 ? static_cast<double>(holds) / scenes : 0.0;
  }

  for (const int k : cfg.topk) {
    double acc = 0.0;
    long scenes = 0;
    for (const ScenePool& pool : pools) {
      if (pool.r_true.empty()) continue;
      ++scenes;
      std::vector<int> order(pool.r_true.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pool.s_pred[static_cast<std::size_t>(a)] >
               pool.s_pred[static_cast<std::size_t>(b)];
      });
      double best = 0.0;
      const std::size_t n = std::min<std::size_t>(order.size(), static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < n; ++i) {
        best = std::max(best, pool.r_true[static_cast<std::size_t>(order[i])]);
      }
      acc += best;
    }
    out.topk_mean_best[k] = scenes > 0 ? acc / scenes : 0.0;
  }
  return out;
}

}  // namespace clover::sim
