// Acceptance suite: each criterion prints one pass/fail line and the binary
// exits with the number of failed criteria. Tolerances are pinned here, next
// to the checks that use them.
//
// Scope note: the per-scene report tables produced by the analyze and demo
// commands are aggregates over heterogeneous pools. Row-level recomposition
// of aggregate columns (for example recomputing a mean composite from mean
// components) is not expected to hold and is deliberately not asserted here;
// the criteria below check the quantities that are defined row by row.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "clover/analytics.hpp"
#include "clover/commands.hpp"
#include "clover/demo_scenes.hpp"
#include "clover/distribution.hpp"
#include "clover/evaluator.hpp"
#include "clover/pseudo_expert.hpp"
#include "clover/ranking.hpp"
#include "clover/refinement.hpp"
#include "clover/rng.hpp"
#include "clover/run_config.hpp"
#include "clover/scorer.hpp"
#include "clover/subscores.hpp"
#include "../tests/oracles.hpp"

namespace {

using namespace clover;

constexpr double kTolComposite = 5e-4;   // criterion 1
constexpr double kTolExact = 1e-12;      // criteria 2, 7, 10, 11
constexpr double kTolDerivative = 1e-6;  // criterion 3
constexpr double kSceneBudgetSec = 5.0;  // criterion 4
constexpr double kBoundsBudgetSec = 30.0;  // criterion 7
constexpr double kTolDrift = 1e-9;       // criterion 8
constexpr double kMinSlopeGap = 0.5;     // criterion 8

int g_failures = 0;

void report(int index, const char* label, bool ok, const std::string& detail = "") {
  std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", index, label,
              detail.empty() ? "" : " | ", detail.c_str());
  if (!ok) ++g_failures;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

scene::Trajectory line_traj(double lat, double speed) {
  scene::Trajectory t;
  t.dt = 0.5;
  for (int k = 1; k <= 8; ++k) t.poses.push_back({5.0 + speed * 0.5 * k, lat, 0.0});
  return t;
}

// criterion 1: the composite of the reference sub-score row.
void criterion_1() {
  eval::SubScores s;
  s.nc = 1.0;
  s.dac = 1.0;
  s.ep = 0.875;
  s.ttc = 1.0;
  s.comfort = 0.999;
  const double value = eval::compose_pdms(s);
  const bool ok = std::abs(value - 0.94775) <= kTolComposite;
  char detail[64];
  std::snprintf(detail, sizeof(detail), "value=%.6f target=0.94775", value);
  report(1, "baseline composite on the reference row", ok, detail);
}

// criterion 2: human-conditioned filtering across randomized pairs.
void criterion_2() {
  util::Rng rng(20001);
  const double grid[] = {0.0, 0.3, 0.7, 1.0};
  bool ok = true;
  std::string detail = "10000 randomized pairs";
  for (int trial = 0; trial < 10000 && ok; ++trial) {
    eval::SubScores agent;
    eval::SubScores human;
    for (std::size_t c = 0; c < eval::SubScores::kCount; ++c) {
      agent.set(c, rng.uniform(0.0, 1.0));
      human.set(c, grid[rng.uniform_int(0, 3)]);
    }

    // Independent recomputation of the filtered composite.
    const auto filt = [&](double a, double h) { return h == 0.0 ? 1.0 : a; };
    const double gates = filt(agent.nc, human.nc) * filt(agent.dac, human.dac) *
                         filt(agent.ddc, human.ddc) * filt(agent.tlc, human.tlc);
    const double avg =
        (5.0 * filt(agent.ttc, human.ttc) + 5.0 * filt(agent.ep, human.ep) +
         2.0 * filt(agent.lk, human.lk) + 2.0 * filt(agent.hc, human.hc) +
         2.0 * filt(agent.ec, human.ec)) /
        16.0;
    const double expected = gates * avg;
    const double got = eval::compose_epdms(agent, human);
    if (std::abs(got - expected) > kTolExact) {
      ok = false;
      detail = "filtered composite mismatch at trial " + std::to_string(trial);
    }

    // An all-ones human reduces filtering to the plain composite.
    const eval::SubScores perfect;
    const double unfiltered = eval::compose_weighted(agent, eval::ScoreWeights::epdms_v2());
    if (std::abs(eval::compose_epdms(agent, perfect) - unfiltered) > kTolExact) {
      ok = false;
      detail = "all-ones human mismatch at trial " + std::to_string(trial);
    }
  }
  report(2, "human-conditioned filtering neutralizes shared failures", ok, detail);
}

// criterion 3: smoothstep endpoints and vanishing derivatives. The endpoints
// are boundary points of the clamped domain, so the derivatives are probed
// with one-sided boundary stencils (second-order for the first derivative,
// third-order for the second); lower-order stencils carry O(h) truncation
// error from the nonzero third derivative and cannot resolve a vanishing
// second derivative at this h. A cubic easing would still fail here with a
// reported second derivative near 6.
void criterion_3() {
  const auto s = [](double r) { return pe::smooth_step(r); };
  bool ok = s(0.0) == 0.0 && s(1.0) == 1.0 && s(0.5) == 0.5;
  const double h = 1e-4;
  const double d0 = (-3.0 * s(0.0) + 4.0 * s(h) - s(2.0 * h)) / (2.0 * h);
  const double d1 = (3.0 * s(1.0) - 4.0 * s(1.0 - h) + s(1.0 - 2.0 * h)) / (2.0 * h);
  const double dd0 = (35.0 * s(0.0) - 104.0 * s(h) + 114.0 * s(2.0 * h) - 56.0 * s(3.0 * h) +
                      11.0 * s(4.0 * h)) /
                     (12.0 * h * h);
  const double dd1 = (35.0 * s(1.0) - 104.0 * s(1.0 - h) + 114.0 * s(1.0 - 2.0 * h) -
                      56.0 * s(1.0 - 3.0 * h) + 11.0 * s(1.0 - 4.0 * h)) /
                     (12.0 * h * h);
  ok = ok && std::abs(d0) < kTolDerivative && std::abs(d1) < kTolDerivative &&
       std::abs(dd0) < kTolDerivative && std::abs(dd1) < kTolDerivative;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "d0=%.2e d1=%.2e dd0=%.2e dd1=%.2e", d0, d1, dd0, dd1);
  report(3, "smoothstep endpoints and vanishing derivatives", ok, detail);
}

// criterion 4: generation pipeline budgets on every bundled scene.
void criterion_4() {
  const auto scenes = cli::demo_scenes();
  const pe::FamilyConfig cfg;
  const eval::EvaluatorConfig eval_cfg;
  bool ok = scenes.size() == 12;
  double worst = 0.0;
  std::string detail;
  for (const auto& scene : scenes) {
    const double t0 = now_seconds();
    const pe::PipelineResult res = pe::run_pipeline(scene, cfg, eval_cfg, 1);
    const double elapsed = now_seconds() - t0;
    worst = std::max(worst, elapsed);

    std::map<pe::Family, int> per_family;
    for (const auto& c : res.generated) ++per_family[c.family];
    const bool counts = res.generated.size() == 261 &&
                        per_family[pe::Family::kLateralTransition] == 200 &&
                        per_family[pe::Family::kOffRoad] == 12 &&
                        per_family[pe::Family::kAccelProfile] == 18 &&
                        per_family[pe::Family::kStopGo] == 9 &&
                        per_family[pe::Family::kApproachBrake] == 10 &&
                        per_family[pe::Family::kOvershoot] == 12;
    const bool budgets = res.scored_indices.size() <= 180 && res.kept.size() <= 50 &&
                         res.training.experts.size() <= 8 &&
                         !res.training.experts.empty();
    if (!counts || !budgets || elapsed >= kSceneBudgetSec) {
      ok = false;
      detail = "scene " + scene.id + (counts ? "" : " counts") + (budgets ? "" : " budgets") +
               (elapsed >= kSceneBudgetSec ? " time" : "");
    }
  }
  if (detail.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "12 scenes, worst %.2fs < %.0fs", worst, kSceneBudgetSec);
    detail = buf;
  }
  report(4, "candidate families, triage, pool, and training budgets", ok, detail);
}

// criterion 5: greedy coverage and farthest-point selection vs brute force.
void criterion_5() {
  util::Rng rng(50005);
  const pe::FamilyConfig cfg;
  bool ok = true;
  std::string detail = "200 pools, exact index sequences";
  const double nc_levels[] = {0.0, 0.5, 1.0};
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const int n = rng.uniform_int(10, 60);
    std::vector<pe::ScoredCandidate> pool;
    for (int i = 0; i < n; ++i) {
      pe::ScoredCandidate sc;
      sc.cand.index = i;
      sc.cand.traj = line_traj(rng.uniform(-3.5, 3.5), rng.uniform(1.0, 12.0));
      sc.scores.nc = nc_levels[rng.uniform_int(0, 2)];
      sc.scores.dac = rng.bernoulli(0.7) ? 1.0 : 0.0;
      sc.scores.ttc = rng.bernoulli(0.7) ? 1.0 : 0.0;
      sc.scores.comfort = rng.bernoulli(0.7) ? 1.0 : 0.0;
      sc.scores.ep = rng.uniform(0.0, 1.0);
      sc.pdms = eval::compose_pdms(sc.scores);
      pool.push_back(std::move(sc));
    }

    const auto picked = pe::coverage_select(pool, cfg);
    const auto expected = oracle::coverage_brute(pool, cfg);
    if (picked.size() != expected.size()) {
      ok = false;
    } else {
      for (std::size_t i = 0; i < picked.size(); ++i) {
        if (picked[i].cand.index != expected[i]) ok = false;
      }
    }
    if (!ok) {
      detail = "coverage mismatch at pool " + std::to_string(trial);
      break;
    }

    const scene::Trajectory human = line_traj(rng.uniform(-2.0, 2.0), rng.uniform(2.0, 8.0));
    const pe::TrainingSample ts = pe::training_sample(pool, human, cfg);
    const auto fps_expected = oracle::training_brute(pool, human, cfg);
    if (ts.sources.size() != fps_expected.size()) {
      ok = false;
    } else {
      for (std::size_t i = 0; i < ts.sources.size(); ++i) {
        if (ts.sources[i] != fps_expected[i]) ok = false;
      }
    }
    if (!ok) detail = "training-sample mismatch at pool " + std::to_string(trial);
  }
  report(5, "coverage and farthest-point selection match brute force", ok, detail);
}

// criterion 6: non-dominated filtering vs the quadratic oracle.
void criterion_6() {
  util::Rng rng(60006);
  bool ok = true;
  std::string detail = "500 pools, exact set equality";
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int trial = 0; trial < 500 && ok; ++trial) {
    const int n = rng.uniform_int(1, 128);
    const int m = rng.uniform_int(2, 6);
    std::vector<std::vector<double>> vs(n, std::vector<double>(m));
    for (auto& v : vs) {
      for (double& x : v) {
        x = rng.bernoulli(0.5) ? grid[rng.uniform_int(0, 4)] : rng.uniform(0.0, 1.0);
      }
    }
    const auto fast = ranking::pareto_front(vs);
    const auto slow = oracle::pareto_brute(vs);
    if (fast.size() != slow.size()) {
      ok = false;
    } else {
      for (std::size_t i = 0; i < fast.size(); ++i) {
        if (static_cast<std::size_t>(fast[i]) != slow[i]) ok = false;
      }
    }
    if (!ok) detail = "front mismatch at pool " + std::to_string(trial);
  }
  report(6, "non-dominated sets match the quadratic oracle", ok, detail);
}

// criterion 7: enrichment inequalities across randomized instances.
void criterion_7() {
  const double t0 = now_seconds();
  util::Rng rng(70007);
  bool ok = true;
  std::string detail;
  double min_slack = 1e300;

  for (int trial = 0; trial < 10000 && ok; ++trial) {
    const auto mu =
        sim::random_distribution(rng.uniform_int(2, 32), util::sub_seed(70007, trial, 0));
    const auto nu =
        sim::random_distribution(rng.uniform_int(2, 32), util::sub_seed(70007, trial, 1));
    sim::EnrichmentStepConfig cfg;
    cfg.alpha = rng.uniform(0.0, 1.0);
    cfg.eta = rng.uniform(0.0, 0.3);
    cfg.r_high = rng.uniform(0.5, 0.99);
    cfg.adversarial = trial % 2 == 0;
    cfg.seed = util::sub_seed(70007, trial, 2);

    const auto mass = sim::enrichment_step(mu, nu, cfg);
    const auto expect = sim::expected_score_step(mu, nu, cfg);
    min_slack = std::min({min_slack, mass.report.slack, expect.report.slack});
    if (!mass.report.satisfied || !expect.report.satisfied ||
        mass.report.slack < -kTolExact || expect.report.slack < -kTolExact) {
      ok = false;
      detail = "single-step violation at trial " + std::to_string(trial);
    }
  }

  for (int trial = 0; trial < 10000 && ok; ++trial) {
    const auto mu0 =
        sim::random_distribution(rng.uniform_int(2, 8), util::sub_seed(70007, trial, 3));
    sim::EnrichmentStepConfig cfg;
    cfg.alpha = rng.uniform(0.2, 0.8);
    cfg.eta = rng.uniform(0.0, 0.05);
    cfg.seed = util::sub_seed(70007, trial, 4);
    const bool rich_selector = trial % 10 == 0;
    const sim::TargetSelector selector =
        [rich_selector](const sim::DiscreteProposalDistribution& cur, int) {
          if (rich_selector) return sim::conditional_top_fraction(cur, 0.25);
          // Point mass on the best-scoring item.
          std::size_t best = 0;
          for (std::size_t i = 1; i < cur.scores.size(); ++i) {
            if (cur.scores[i] > cur.scores[best]) best = i;
          }
          sim::DiscreteProposalDistribution out;
          out.scores = {cur.scores[best]};
          out.probs = {1.0};
          return out;
        };
    const auto res = sim::multi_round(mu0, selector, cfg, 10);
    const double slack = res.final_value - res.cumulative_lower;
    min_slack = std::min(min_slack, slack);
    if (!res.satisfied || slack < -kTolExact) {
      ok = false;
      detail = "multi-round violation at trial " + std::to_string(trial);
    }
  }

  const double elapsed = now_seconds() - t0;
  if (elapsed >= kBoundsBudgetSec) {
    ok = false;
    detail = "time budget exceeded";
  }
  if (detail.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "min slack %.3e, %.1fs < %.0fs", min_slack, elapsed,
                  kBoundsBudgetSec);
    detail = buf;
  }
  report(7, "enrichment lower bounds across 10k randomized instances", ok, detail);
}

// criterion 8: refit-vs-frozen drift bounds and growth separation.
void criterion_8() {
  const std::vector<double> horizons{4.0, 8.0, 16.0, 32.0, 64.0};
  std::vector<double> refit_final;
  std::vector<double> fixed_final;
  bool ok = true;
  for (const double T : horizons) {
    const auto res = sim::drift_experiment(static_cast<int>(T), 0.02, 0.05,
                                           util::sub_seed(80008, static_cast<int>(T)));
    if (!res.refit_within || !res.fixed_within) ok = false;
    for (std::size_t t = 0; t < res.refit_cumulative.size(); ++t) {
      const double rounds = static_cast<double>(t + 1);
      if (res.refit_cumulative[t] > rounds * (0.02 + 0.05) + kTolDrift) ok = false;
    }
    refit_final.push_back(res.refit_cumulative.back());
    fixed_final.push_back(res.fixed_cumulative.back());
  }
  const double slope_refit = sim::loglog_slope(horizons, refit_final);
  const double slope_fixed = sim::loglog_slope(horizons, fixed_final);
  const double gap = slope_fixed - slope_refit;
  ok = ok && gap >= kMinSlopeGap;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "slopes refit=%.3f frozen=%.3f gap=%.3f >= %.1f",
                slope_refit, slope_fixed, gap, kMinSlopeGap);
  report(8, "scorer refit keeps drift error linear; frozen grows superlinearly", ok, detail);
}

// criterion 9: scorer-front containment in the approximate true front.
void criterion_9() {
  bool ok = true;
  int passed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    util::Rng rng(util::sub_seed(90009, trial));
    std::vector<std::vector<double>> vs(50, std::vector<double>(3));
    for (auto& v : vs) {
      for (double& x : v) x = rng.uniform(0.0, 1.0);
    }
    const auto res =
        sim::pareto_consistency_check(vs, 0.05, 1e-6, util::sub_seed(90009, trial, 1), 1.0, 0.1);
    if (res.contained && res.coverage_checked && res.coverage_contained) {
      ++passed;
    } else {
      ok = false;
    }
  }
  report(9, "perturbed fronts stay inside the widened true front",
         ok && passed == 100, std::to_string(passed) + "/100 trials contained");
}

// criterion 10: margin separation with gamma beyond twice the error bound.
void criterion_10() {
  util::Rng rng(100010);
  bool ok = true;
  long violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_high = rng.uniform_int(2, 8);
    const int n_low = rng.uniform_int(2, 8);
    const double eps = rng.uniform(0.0, 0.1);
    const double gamma = 2.0 * eps + rng.uniform(0.01, 0.2);
    const double r_low = rng.uniform(0.1, 0.5);
    const auto rep = sim::margin_trial(n_high, n_low, r_low + gamma, r_low, eps,
                                       util::sub_seed(100010, trial));
    violations += rep.violations;
    if (!rep.premise_ok || !rep.satisfied || rep.violations != 0) ok = false;
  }
  report(10, "margin beyond 2*eps forces zero ranking inversions", ok,
         std::to_string(violations) + " inversions over 1000 pools");
}

// criterion 11: anchored reranking formula, equivalence, and stability.
void criterion_11() {
  bool ok = true;
  std::string detail;

  // Exact quality on the reference point.
  ranking::AnchorConfig cfg;
  cfg.lambda_score = 2.0;
  cfg.lambda_xy = 0.2;
  cfg.lambda_heading = 0.5;
  const scene::Trajectory anchor = line_traj(0.0, 4.0);
  scene::Trajectory offset = anchor;
  for (auto& p : offset.poses) {
    p.y += 2.5;
    p.heading += 0.35;
  }
  const auto ref = ranking::anchor_rerank({offset}, {0.9}, anchor, cfg);
  if (std::abs(ref.quality[0] - 1.2) > kTolExact) {
    ok = false;
    detail = "reference quality off";
  }

  // Zero penalty weights reproduce the plain score ranking exactly.
  const auto scenes = cli::demo_scenes();
  const auto& scene = scenes[0];
  const auto cands = pe::generate_families(scene, pe::FamilyConfig{}, 1);
  std::vector<scene::Trajectory> pool;
  for (std::size_t i = 0; i < cands.size(); i += 5) pool.push_back(cands[i].traj);
  ranking::OracleScorer scorer{eval::EvaluatorConfig{}};
  const auto ranked = ranking::rank(scene, pool, scorer);
  ranking::AnchorConfig zero = cfg;
  zero.lambda_xy = 0.0;
  zero.lambda_heading = 0.0;
  const auto anchored = ranking::anchor_rerank(pool, ranked.composed, scene.human, zero);
  if (anchored.order != ranked.order) {
    ok = false;
    detail = "zero-weight ordering differs from plain ranking";
  }

  // Two jittered frames: plain ordering flips the winner, anchored does not.
  const scene::Trajectory close = line_traj(0.2, 4.0);
  const scene::Trajectory far = line_traj(3.0, 4.0);
  const std::vector<scene::Trajectory> pair{close, far};
  const std::vector<double> frame1{0.900, 0.905};
  const std::vector<double> frame2{0.905, 0.900};
  const auto plain1 = ranking::anchor_rerank(pair, frame1, anchor, zero);
  const auto plain2 = ranking::anchor_rerank(pair, frame2, anchor, zero);
  const int plain_switches = plain1.order[0] != plain2.order[0] ? 1 : 0;
  const auto soft1 = ranking::anchor_rerank(pair, frame1, anchor, cfg);
  const auto soft2 = ranking::anchor_rerank(pair, frame2, anchor, cfg);
  const int soft_switches = soft1.order[0] != soft2.order[0] ? 1 : 0;
  if (plain_switches != 1 || soft_switches != 0) {
    ok = false;
    detail = "jitter stability not achieved";
  }

  if (detail.empty()) detail = "quality=1.2 exact, ordering equivalence, 1->0 switches";
  report(11, "anchored soft reranking formula and stability", ok, detail);
}

// criterion 12: proposal-set analytics on hand-checkable pools.
void criterion_12() {
  bool ok = true;
  std::string detail;

  const scene::Trajectory a = line_traj(0.0, 4.0);
  const auto same = analytics::pairwise_ade_fde({a, a, a});
  const auto spread = analytics::endpoint_spread({a, a, a});
  if (same.ade != 0.0 || same.fde != 0.0 || spread.std_radius != 0.0 || spread.area != 0.0) {
    ok = false;
    detail = "identical pool spread not zero";
  }
  if (std::abs(analytics::effective_rank({a, a, a}) - 1.0) > kTolExact) {
    ok = false;
    detail = "identical pool effective rank not 1";
  }

  scene::Trajectory b = a;
  for (auto& p : b.poses) p.y += 1.0;
  const auto offset_pair = analytics::pairwise_ade_fde({a, b});
  if (std::abs(offset_pair.ade - 1.0) > kTolExact ||
      std::abs(offset_pair.fde - 1.0) > kTolExact) {
    ok = false;
    detail = "unit offset pair ade/fde not 1";
  }

  util::Rng rng(120012);
  for (int trial = 0; trial < 200 && ok; ++trial) {
    const int n = rng.uniform_int(1, 64);
    std::vector<double> truth;
    for (int i = 0; i < n; ++i) truth.push_back(rng.uniform(0.0, 1.0));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng.engine());
    const auto rows = analytics::topk_tables(truth, order, {1, 2, 3, 6});
    for (const auto& row : rows) {
      const int k = std::min(row.k, n);
      double best = 0.0;
      double sum = 0.0;
      for (int i = 0; i < k; ++i) {
        best = std::max(best, truth[order[i]]);
        sum += truth[order[i]];
      }
      if (std::abs(row.oracle - best) > kTolExact ||
          std::abs(row.mean - sum / k) > kTolExact) {
        ok = false;
        detail = "topk mismatch at pool " + std::to_string(trial);
      }
    }
  }
  if (detail.empty()) detail = "degenerate pools exact, 200 topk pools match sort oracle";
  report(12, "proposal-set analytics on reference pools", ok, detail);
}

// criterion 13: end-to-end demo determinism across thread counts.
void criterion_13() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "clover_acceptance_demo";
  std::error_code ec;
  fs::remove_all(root, ec);
  const fs::path dir1 = root / "jobs1";
  const fs::path dir8 = root / "jobs8";

  bool ok = true;
  std::string detail;
  try {
    cli::RunConfig cfg1;
    cfg1.seed = 1;
    cfg1.jobs = 1;
    cli::RunConfig cfg8 = cfg1;
    cfg8.jobs = 8;
    if (cli::cmd_demo(cfg1, dir1.string()) != 0) throw std::runtime_error("demo jobs=1 failed");
    if (cli::cmd_demo(cfg8, dir8.string()) != 0) throw std::runtime_error("demo jobs=8 failed");

    const auto read_file = [](const fs::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    std::vector<fs::path> rels;
    for (const auto& entry : fs::recursive_directory_iterator(dir1)) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), dir1);
      // The config dump records the jobs setting itself and is the one file
      // allowed to differ.
      if (rel.filename() == "config.json") continue;
      rels.push_back(rel);
    }
    if (rels.empty()) {
      ok = false;
      detail = "demo produced no comparable files";
    }
    int compared = 0;
    for (const auto& rel : rels) {
      const fs::path other = dir8 / rel;
      if (!fs::exists(other)) {
        ok = false;
        detail = "missing in jobs=8 run: " + rel.string();
        break;
      }
      if (read_file(dir1 / rel) != read_file(other)) {
        ok = false;
        detail = "byte mismatch: " + rel.string();
        break;
      }
      ++compared;
    }
    if (ok) detail = std::to_string(compared) + " files byte-identical";
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  fs::remove_all(root, ec);
  report(13, "demo pipeline is byte-identical across thread counts", ok, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  std::printf("%d/13 criteria passed\n", 13 - g_failures);
  return g_failures;
}
