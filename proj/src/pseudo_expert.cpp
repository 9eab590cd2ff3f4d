#include "clover/pseudo_expert.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "clover/parallel.hpp"
#include "clover/rng.hpp"

namespace clover::pe {

namespace {

using scene::Scene;
using scene::Trajectory;

constexpr double kGridEps = 1e-9;

int bin_index(double value, const std::vector<double>& edges) {
  const int n = static_cast<int>(edges.size());
  for (int i = 0; i + 1 < n; ++i) {
    if (value >= edges[i] && value < edges[i + 1]) return i;
  }
  return value < edges.front() ? 0 : n - 2;
}

double nearest_speed(double v, const std::vector<double>& speeds) {
  double best = speeds.front();
  double best_d = std::abs(v - best);
  for (const double s : speeds) {
    const double d = std::abs(v - s);
    if (d < best_d - kGridEps) {
      best = s;
      best_d = d;
    }
  }
  return best;
}

// Deterministic subsample that keeps every stratum represented: strata are
// visited round-robin in order, each handing out its items in a seeded
// shuffled order. The survivors keep their enumeration order.
std::vector<int> stratified_subsample(int n_items, int target,
                                      const std::vector<int>& stratum_of, int n_strata,
                                      std::uint64_t seed) {
  if (target >= n_items) {
    std::vector<int> all(n_items);
    for (int i = 0; i < n_items; ++i) all[i] = i;
    return all;
  }
  std::vector<std::vector<int>> buckets(n_strata);
  for (int i = 0; i < n_items; ++i) buckets[stratum_of[i]].push_back(i);
  for (int s = 0; s < n_strata; ++s) {
    util::Rng rng(util::sub_seed(seed, static_cast<std::uint64_t>(s)));
    std::shuffle(buckets[s].begin(), buckets[s].end(), rng.engine());
  }
  std::vector<int> picked;
  picked.reserve(target);
  std::vector<std::size_t> cursor(n_strata, 0);
  while (static_cast<int>(picked.size()) < target) {
    bool progressed = false;
    for (int s = 0; s < n_strata && static_cast<int>(picked.size()) < target; ++s) {
      if (cursor[s] < buckets[s].size()) {
        picked.push_back(buckets[s][cursor[s]++]);
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

struct GridItem {
  CandidateParams params;
  std::vector<double> speed_profile;
  std::vector<double> lateral_profile;  // empty: use the smooth-step builder
  int stratum = 0;
};

void append_family(std::vector<Candidate>& out, const Scene& scene, const FamilyConfig& cfg,
                   Family family, std::vector<GridItem> grid, int target, int n_strata,
                   std::uint64_t seed) {
  if (static_cast<int>(grid.size()) < target) {
    throw std::invalid_argument(std::string("generate_families: family '") +
                                family_name(family) + "' grid smaller than its target count");
  }
  std::vector<int> strata(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) strata[i] = grid[i].stratum;
  const std::vector<int> picked = stratified_subsample(
      static_cast<int>(grid.size()), target, strata, n_strata,
      util::sub_seed(seed, static_cast<std::uint64_t>(family)));
  for (const int g : picked) {
    Candidate c;
    c.index = static_cast<int>(out.size());
    c.family = family;
    c.params = grid[g].params;
    if (grid[g].lateral_profile.empty()) {
      c.traj = build_candidate(scene, grid[g].speed_profile, c.params.lat_start,
                               c.params.lat_end, c.params.portion, cfg.xy_limit);
    } else {
      c.traj = build_candidate_profiles(scene, grid[g].speed_profile, grid[g].lateral_profile,
                                        cfg.xy_limit);
    }
    out.push_back(std::move(c));
  }
}

std::vector<double> constant_profile(int steps, double v) {
  return std::vector<double>(static_cast<std::size_t>(steps), v);
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::kLateralTransition: return "lateral_transition";
    case Family::kOffRoad: return "off_road";
    case Family::kAccelProfile: return "accel_profile";
    case Family::kStopGo: return "stop_go";
    case Family::kApproachBrake: return "approach_brake";
    case Family::kOvershoot: return "overshoot";
  }
  return "unknown";
}

const char* feasibility_name(Feasibility f) {
  switch (f) {
    case Feasibility::kFeasible: return "feasible";
    case Feasibility::kNearFeasible: return "near_feasible";
    case Feasibility::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double smooth_step(double r) {
  if (r <= 0.0) return 0.0;
  if (r >= 1.0) return 1.0;
  return r * r * r * (r * (6.0 * r - 15.0) + 10.0);
}

scene::Trajectory build_candidate_profiles(const Scene& scene,
                                           const std::vector<double>& speed_profile,
                                           const std::vector<double>& lateral_profile,
                                           double xy_limit) {
  if (speed_profile.empty() || speed_profile.size() != lateral_profile.size()) {
    throw std::invalid_argument("build_candidate: speed and lateral profiles must match");
  }
  const scene::StationLateral ego_sl =
      scene::project_to_centerline(scene.centerline, scene.ego.pose.position());
  Trajectory traj;
  traj.dt = scene.dt;
  traj.poses.reserve(speed_profile.size());
  double station = ego_sl.station;
  for (std::size_t t = 0; t < speed_profile.size(); ++t) {
    if (speed_profile[t] < 0.0) {
      throw std::invalid_argument("build_candidate: negative speed in profile");
    }
    station += speed_profile[t] * scene.dt;
    traj.poses.push_back(
        scene::station_lateral_to_cartesian(scene.centerline, station, lateral_profile[t]));
  }
  return sanitize_trajectory(std::move(traj), xy_limit);
}

scene::Trajectory build_candidate(const Scene& scene, const std::vector<double>& speed_profile,
                                  double lat_start, double lat_end, double portion,
                                  double xy_limit) {
  if (portion <= 0.0 || portion > 1.0) {
    throw std::invalid_argument("build_candidate: portion must lie in (0, 1]");
  }
  const double T = static_cast<double>(speed_profile.size());
  std::vector<double> lateral(speed_profile.size());
  for (std::size_t t = 0; t < speed_profile.size(); ++t) {
    const double r = static_cast<double>(t + 1) / (portion * T);
    lateral[t] = lat_start + (lat_end - lat_start) * smooth_step(r);
  }
  return build_candidate_profiles(scene, speed_profile, lateral, xy_limit);
}

std::vector<Candidate> generate_families(const Scene& scene, const FamilyConfig& cfg,
                                         std::uint64_t seed) {
  const int T = scene.horizon_steps;
  const double dt = scene.dt;
  const double v0 = scene.ego.speed;
  const scene::StationLateral ego_sl =
      scene::project_to_centerline(scene.centerline, scene.ego.pose.position());
  const double lat0 = ego_sl.lateral;

  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(cfg.total_target()));

  // Lateral transitions: speed x lateral target x transition portion.
  {
    std::vector<GridItem> grid;
    for (std::size_t si = 0; si < cfg.speeds.size(); ++si) {
      for (const double lat : cfg.regular_laterals) {
        for (const double portion : cfg.portions) {
          GridItem item;
          item.params = {cfg.speeds[si], lat0, lat, portion, 0.0, 0};
          item.speed_profile = constant_profile(T, cfg.speeds[si]);
          item.stratum = static_cast<int>(si);
          grid.push_back(std::move(item));
        }
      }
    }
    append_family(out, scene, cfg, Family::kLateralTransition, std::move(grid),
                  cfg.target_lateral, static_cast<int>(cfg.speeds.size()), seed);
  }

  // Off-road probes at the grid speed closest to the current one.
  {
    const double v = nearest_speed(v0, cfg.speeds);
    std::vector<GridItem> grid;
    for (std::size_t li = 0; li < cfg.offroad_laterals.size(); ++li) {
      for (const double portion : cfg.portions) {
        GridItem item;
        item.params = {v, lat0, cfg.offroad_laterals[li], portion, 0.0, 0};
        item.speed_profile = constant_profile(T, v);
        item.stratum = static_cast<int>(li);
        grid.push_back(std::move(item));
      }
    }
    append_family(out, scene, cfg, Family::kOffRoad, std::move(grid), cfg.target_offroad,
                  static_cast<int>(cfg.offroad_laterals.size()), seed);
  }

  // Constant-acceleration profiles around the current speed.
  {
    std::vector<GridItem> grid;
    for (std::size_t oi = 0; oi < cfg.accel_base_offsets.size(); ++oi) {
      const double v_base = std::clamp(v0 + cfg.accel_base_offsets[oi], 0.0, cfg.max_speed);
      for (const double a : cfg.accels) {
        GridItem item;
        item.params = {v_base, lat0, lat0, 1.0, a, 0};
        item.speed_profile.resize(T);
        for (int k = 0; k < T; ++k) {
          item.speed_profile[k] = std::clamp(v_base + a * k * dt, 0.0, cfg.max_speed);
        }
        item.stratum = static_cast<int>(oi);
        grid.push_back(std::move(item));
      }
    }
    append_family(out, scene, cfg, Family::kAccelProfile, std::move(grid), cfg.target_accel,
                  static_cast<int>(cfg.accel_base_offsets.size()), seed);
  }

  // Stop-and-go: ramp to zero within the early horizon, then hold.
  {
    std::vector<GridItem> grid;
    for (std::size_t oi = 0; oi < cfg.accel_base_offsets.size(); ++oi) {
      const double v_base = std::clamp(v0 + cfg.accel_base_offsets[oi], 0.0, cfg.max_speed);
      for (const double frac : cfg.stopgo_fractions) {
        const int stop_steps = std::max(1, static_cast<int>(std::lround(frac * T)));
        GridItem item;
        item.params = {v_base, lat0, lat0, frac, 0.0, stop_steps};
        item.speed_profile.resize(T, 0.0);
        for (int k = 0; k < std::min(stop_steps, T); ++k) {
          item.speed_profile[k] =
              v_base * std::max(0.0, 1.0 - static_cast<double>(k + 1) / stop_steps);
        }
        item.stratum = static_cast<int>(oi);
        grid.push_back(std::move(item));
      }
    }
    append_family(out, scene, cfg, Family::kStopGo, std::move(grid), cfg.target_stopgo,
                  static_cast<int>(cfg.accel_base_offsets.size()), seed);
  }

  // Approach-and-brake: hold the current speed, then decelerate.
  {
    std::vector<GridItem> grid;
    for (std::size_t ki = 0; ki < cfg.brake_start_steps.size(); ++ki) {
      for (const double d : cfg.brake_decels) {
        GridItem item;
        item.params = {v0, lat0, lat0, 1.0, d, cfg.brake_start_steps[ki]};
        item.speed_profile.resize(T);
        double v = v0;
        for (int k = 0; k < T; ++k) {
          if (k >= cfg.brake_start_steps[ki]) v = std::max(0.0, v + d * dt);
          item.speed_profile[k] = v;
        }
        item.stratum = static_cast<int>(ki);
        grid.push_back(std::move(item));
      }
    }
    append_family(out, scene, cfg, Family::kApproachBrake, std::move(grid), cfg.target_brake,
                  static_cast<int>(cfg.brake_start_steps.size()), seed);
  }

  // Overshoot: pass the lateral target by overshoot_factor, then settle.
  {
    const double v = nearest_speed(v0, cfg.speeds);
    std::vector<GridItem> grid;
    for (std::size_t li = 0; li < cfg.overshoot_laterals.size(); ++li) {
      const double lat_end = cfg.overshoot_laterals[li];
      const double lat_peak = lat_end + cfg.overshoot_factor * (lat_end - lat0);
      for (const double portion : cfg.portions) {
        GridItem item;
        item.params = {v, lat0, lat_end, portion, 0.0, 0};
        item.speed_profile = constant_profile(T, v);
        item.lateral_profile.resize(T);
        const double window = portion * T;
        const double rise = 0.6 * window;
        for (int t = 0; t < T; ++t) {
          const double step = static_cast<double>(t + 1);
          if (step <= rise) {
            item.lateral_profile[t] = lat0 + (lat_peak - lat0) * smooth_step(step / rise);
          } else {
            const double r = (step - rise) / (window - rise);
            item.lateral_profile[t] = lat_peak + (lat_end - lat_peak) * smooth_step(r);
          }
        }
        item.stratum = static_cast<int>(li);
        grid.push_back(std::move(item));
      }
    }
    append_family(out, scene, cfg, Family::kOvershoot, std::move(grid), cfg.target_overshoot,
                  static_cast<int>(cfg.overshoot_laterals.size()), seed);
  }

  return out;
}

Feasibility precheck(const Scene& scene, const Candidate& cand, const FamilyConfig& cfg,
                     const eval::EvaluatorConfig& eval_cfg) {
  int off_steps = 0;
  bool near_obstacle = false;
  for (std::size_t t = 0; t < cand.traj.poses.size(); ++t) {
    const scene::Polygon fp = scene::ego_footprint(cand.traj.poses[t], eval_cfg.dims);
    bool off = false;
    for (const scene::Vec2& corner : fp) {
      if (!scene::point_in_drivable(scene, corner)) {
        off = true;
        break;
      }
    }
    if (off) ++off_steps;
    for (const scene::ObstacleTrack& track : scene.obstacles) {
      const double d = scene::polygon_distance(fp, track.footprint_at(t));
      if (d <= 0.0) return Feasibility::kInfeasible;
      if (d < cfg.precheck_margin) near_obstacle = true;
    }
  }
  if (off_steps > cfg.precheck_offroad_limit) return Feasibility::kInfeasible;
  if (off_steps > 0 || near_obstacle) return Feasibility::kNearFeasible;
  return Feasibility::kFeasible;
}

std::vector<int> select_for_scoring(const std::vector<Feasibility>& feasibility,
                                    const FamilyConfig& cfg, std::uint64_t seed) {
  std::vector<int> feasible, near, infeasible;
  for (std::size_t i = 0; i < feasibility.size(); ++i) {
    switch (feasibility[i]) {
      case Feasibility::kFeasible: feasible.push_back(static_cast<int>(i)); break;
      case Feasibility::kNearFeasible: near.push_back(static_cast<int>(i)); break;
      case Feasibility::kInfeasible: infeasible.push_back(static_cast<int>(i)); break;
    }
  }
  const std::size_t cap = static_cast<std::size_t>(cfg.max_scored);
  std::vector<int> picked;
  picked.reserve(cap);
  for (const int i : feasible) {
    if (picked.size() >= cap) return picked;
    picked.push_back(i);
  }
  for (const int i : near) {
    if (picked.size() >= cap) return picked;
    picked.push_back(i);
  }
  if (picked.size() < cap && !infeasible.empty()) {
    util::Rng rng(util::sub_seed(seed, 0x1f));
    std::shuffle(infeasible.begin(), infeasible.end(), rng.engine());
    const std::size_t need = std::min(cap - picked.size(), infeasible.size());
    std::vector<int> fill(infeasible.begin(), infeasible.begin() + need);
    std::sort(fill.begin(), fill.end());
    picked.insert(picked.end(), fill.begin(), fill.end());
  }
  return picked;
}

std::vector<ScoredCandidate> coverage_select(const std::vector<ScoredCandidate>& scored,
                                             const FamilyConfig& cfg) {
  if (static_cast<int>(scored.size()) <= cfg.pool_keep) return scored;

  struct Tagged {
    std::array<int, 5> key;
    int score_bin;
  };
  std::vector<Tagged> tags(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const eval::SubScores& s = scored[i].scores;
    tags[i].key = {s.dac < 1.0 ? 0 : 1, s.nc < 1.0 ? 1 : 0, s.ttc < 1.0 ? 0 : 1,
                   s.comfort < 1.0 ? 0 : 1, bin_index(s.ep, cfg.progress_bins)};
    tags[i].score_bin = bin_index(scored[i].pdms, cfg.score_bins);
  }

  std::map<std::array<int, 5>, int> key_count;
  std::vector<int> bin_count(cfg.score_bins.size(), 0);
  std::vector<bool> taken(scored.size(), false);
  std::vector<ScoredCandidate> kept;
  kept.reserve(cfg.pool_keep);

  for (int round = 0; round < cfg.pool_keep; ++round) {
    int best = -1;
    double best_cost = 0.0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
      if (taken[i]) continue;
      auto it = key_count.find(tags[i].key);
      const int kc = it == key_count.end() ? 0 : it->second;
      const double cost = 10.0 * kc + bin_count[tags[i].score_bin];
      if (best < 0 || cost < best_cost ||
          (cost == best_cost && (scored[i].pdms > scored[best].pdms ||
                                 (scored[i].pdms == scored[best].pdms &&
                                  scored[i].cand.index < scored[best].cand.index)))) {
        best = static_cast<int>(i);
        best_cost = cost;
      }
    }
    if (best < 0) break;
    taken[best] = true;
    ++key_count[tags[best].key];
    ++bin_count[tags[best].score_bin];
    kept.push_back(scored[best]);
  }
  return kept;
}

std::vector<ScoredCandidate> boundary_interpolate(const Scene& scene,
                                                  const std::vector<ScoredCandidate>& kept,
                                                  const FamilyConfig& cfg,
                                                  const eval::EvaluatorConfig& eval_cfg,
                                                  const eval::SubScores& human_scores) {
  // Representative (highest-scoring) candidate per lateral target within each
  // (family, speed) group.
  std::map<std::pair<int, double>, std::map<double, const ScoredCandidate*>> groups;
  for (const ScoredCandidate& sc : kept) {
    auto& reps = groups[{static_cast<int>(sc.cand.family), sc.cand.params.speed}];
    auto [it, inserted] = reps.try_emplace(sc.cand.params.lat_end, &sc);
    if (!inserted && sc.pdms > it->second->pdms) it->second = &sc;
  }

  struct Boundary {
    double gap;
    const ScoredCandidate* lo;
    const ScoredCandidate* hi;
  };
  std::vector<Boundary> boundaries;
  for (const auto& [key, reps] : groups) {
    const ScoredCandidate* prev = nullptr;
    for (const auto& [lat, sc] : reps) {
      if (prev) {
        const double gap = std::abs(prev->pdms - sc->pdms);
        if (gap > cfg.boundary_drop_threshold) boundaries.push_back({gap, prev, sc});
      }
      prev = sc;
    }
  }
  std::sort(boundaries.begin(), boundaries.end(), [](const Boundary& a, const Boundary& b) {
    if (a.gap != b.gap) return a.gap > b.gap;
    if (a.lo->cand.params.lat_end != b.lo->cand.params.lat_end) {
      return a.lo->cand.params.lat_end < b.lo->cand.params.lat_end;
    }
    return a.lo->cand.index < b.lo->cand.index;
  });
  if (static_cast<int>(boundaries.size()) > cfg.boundary_max) {
    boundaries.resize(cfg.boundary_max);
  }

  int next_index = -1;
  for (const ScoredCandidate& sc : kept) next_index = std::max(next_index, sc.cand.index);
  ++next_index;

  std::vector<ScoredCandidate> extras;
  for (const Boundary& b : boundaries) {
    const ScoredCandidate* anchor = b.lo->pdms >= b.hi->pdms ? b.lo : b.hi;
    const int steps = static_cast<int>(scene.horizon_steps);
    for (int k = 1; k <= cfg.boundary_samples; ++k) {
      const double frac = static_cast<double>(k) / (cfg.boundary_samples + 1);
      const double lat_mid = b.lo->cand.params.lat_end +
                             frac * (b.hi->cand.params.lat_end - b.lo->cand.params.lat_end);
      ScoredCandidate extra;
      extra.cand.index = next_index++;
      extra.cand.family = anchor->cand.family;
      extra.cand.params = anchor->cand.params;
      extra.cand.params.lat_end = lat_mid;
      extra.cand.traj = build_candidate(
          scene, std::vector<double>(steps, anchor->cand.params.speed),
          extra.cand.params.lat_start, lat_mid, anchor->cand.params.portion, cfg.xy_limit);
      extra.scores = eval::compute_subscores(scene, extra.cand.traj, eval_cfg);
      extra.pdms = eval::compose_pdms(extra.scores);
      extra.epdms = eval::compose_epdms(extra.scores, human_scores);
      extra.feasibility = precheck(scene, extra.cand, cfg, eval_cfg);
      extra.interpolated = true;
      extras.push_back(std::move(extra));
    }
  }
  return extras;
}

TrainingSample training_sample(const std::vector<ScoredCandidate>& pool,
                               const scene::Trajectory& human, const FamilyConfig& cfg) {
  TrainingSample ts;
  std::vector<const ScoredCandidate*> qualified;
  for (const ScoredCandidate& sc : pool) {
    if (sc.pdms >= cfg.training_threshold) qualified.push_back(&sc);
  }
  if (qualified.empty()) {
    ts.experts.push_back(human);
    ts.sources.push_back(-1);
    ts.human_fallback = true;
    return ts;
  }

  std::sort(qualified.begin(), qualified.end(),
            [](const ScoredCandidate* a, const ScoredCandidate* b) {
              if (a->pdms != b->pdms) return a->pdms > b->pdms;
              return a->cand.index < b->cand.index;
            });

  // Farthest-point sampling seeded at the best candidate; min-distances to
  // the picked set update incrementally.
  const std::size_t max_n = static_cast<std::size_t>(cfg.training_max);
  std::vector<bool> picked(qualified.size(), false);
  std::vector<double> min_dist(qualified.size(), 0.0);
  std::vector<std::size_t> selection{0};
  picked[0] = true;
  for (std::size_t i = 1; i < qualified.size(); ++i) {
    min_dist[i] = scene::trajectory_l1(qualified[i]->cand.traj, qualified[0]->cand.traj,
                                       cfg.heading_weight);
  }
  while (selection.size() < max_n && selection.size() < qualified.size()) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t i = 0; i < qualified.size(); ++i) {
      if (picked[i]) continue;
      if (min_dist[i] > best_d) {
        best_d = min_dist[i];
        best = i;
      }
    }
    picked[best] = true;
    selection.push_back(best);
    for (std::size_t i = 0; i < qualified.size(); ++i) {
      if (picked[i]) continue;
      min_dist[i] = std::min(
          min_dist[i],
          scene::trajectory_l1(qualified[i]->cand.traj, qualified[best]->cand.traj,
                               cfg.heading_weight));
    }
  }

  for (const std::size_t i : selection) {
    ts.experts.push_back(qualified[i]->cand.traj);
    ts.sources.push_back(qualified[i]->cand.index);
  }

  if (ts.experts.size() < max_n) {
    double human_dist = std::numeric_limits<double>::max();
    for (const scene::Trajectory& t : ts.experts) {
      human_dist = std::min(human_dist, scene::trajectory_l1(human, t, cfg.heading_weight));
    }
    if (human_dist > cfg.coverage_radius) {
      ts.experts.push_back(human);
      ts.sources.push_back(-1);
    }
  }
  return ts;
}

PipelineResult run_pipeline(const Scene& scene, const FamilyConfig& cfg,
                            const eval::EvaluatorConfig& eval_cfg, std::uint64_t seed,
                            int jobs) {
  PipelineResult result;
  const std::uint64_t scene_seed = util::sub_seed(seed, scene.id, 0);
  result.generated = generate_families(scene, cfg, scene_seed);

  result.feasibility.resize(result.generated.size());
  util::parallel_for(result.generated.size(), jobs, [&](std::size_t i) {
    result.feasibility[i] = precheck(scene, result.generated[i], cfg, eval_cfg);
  });

  result.scored_indices =
      select_for_scoring(result.feasibility, cfg, util::sub_seed(seed, scene.id, 1));

  const eval::SubScores human_scores = eval::resolve_human_subscores(scene);
  result.scored.resize(result.scored_indices.size());
  util::parallel_for(result.scored_indices.size(), jobs, [&](std::size_t i) {
    const Candidate& cand = result.generated[result.scored_indices[i]];
    ScoredCandidate sc;
    sc.cand = cand;
    sc.scores = eval::compute_subscores(scene, cand.traj, eval_cfg);
    sc.pdms = eval::compose_pdms(sc.scores);
    sc.epdms = eval::compose_epdms(sc.scores, human_scores);
    sc.feasibility = result.feasibility[result.scored_indices[i]];
    result.scored[i] = std::move(sc);
  });

  result.kept = coverage_select(result.scored, cfg);
  if (cfg.drop_wrong_direction) {
    std::erase_if(result.kept,
                  [](const ScoredCandidate& sc) { return sc.scores.ddc < 1.0; });
  }

  result.boundary_extras =
      boundary_interpolate(scene, result.kept, cfg, eval_cfg, human_scores);
  if (cfg.drop_wrong_direction) {
    std::erase_if(result.boundary_extras,
                  [](const ScoredCandidate& sc) { return sc.scores.ddc < 1.0; });
  }

  std::vector<ScoredCandidate> training_pool = result.kept;
  training_pool.insert(training_pool.end(), result.boundary_extras.begin(),
                       result.boundary_extras.end());
  result.training = training_sample(training_pool, scene.human, cfg);
  return result;
}

nlohmann::json scored_candidate_to_json(const Scene& scene, const ScoredCandidate& sc) {
  char id[32];
  std::snprintf(id, sizeof(id), "%s_%04d", sc.interpolated ? "interp" : "cand", sc.cand.index);
  eval::ScoredRow row{scene.id, id, sc.scores, sc.pdms, sc.epdms};
  nlohmann::json j = eval::scored_row_to_json(row);
  j["family"] = family_name(sc.cand.family);
  j["feasibility"] = feasibility_name(sc.feasibility);
  j["interpolated"] = sc.interpolated;
  j["params"] = {{"speed", sc.cand.params.speed},     {"lat_start", sc.cand.params.lat_start},
                 {"lat_end", sc.cand.params.lat_end}, {"portion", sc.cand.params.portion},
                 {"accel", sc.cand.params.accel},     {"aux", sc.cand.params.aux}};
  nlohmann::json traj = nlohmann::json::array();
  for (const scene::Pose2D& p : sc.cand.traj.poses) traj.push_back({p.x, p.y, p.heading});
  j["trajectory"] = std::move(traj);
  j["dt"] = sc.cand.traj.dt;
  return j;
}

nlohmann::json training_sample_to_json(const Scene& scene, const TrainingSample& ts,
                                       int training_max) {
  nlohmann::json j;
  j["scene_id"] = scene.id;
  nlohmann::json experts = nlohmann::json::array();
  nlohmann::json mask = nlohmann::json::array();
  nlohmann::json sources = nlohmann::json::array();
  for (int m = 0; m < training_max; ++m) {
    nlohmann::json traj = nlohmann::json::array();
    if (m < static_cast<int>(ts.experts.size())) {
      for (const scene::Pose2D& p : ts.experts[m].poses) traj.push_back({p.x, p.y, p.heading});
      mask.push_back(1);
      sources.push_back(ts.sources[m]);
    } else {
      for (int t = 0; t < scene.horizon_steps; ++t) traj.push_back({0.0, 0.0, 0.0});
      mask.push_back(0);
      sources.push_back(-2);
    }
    experts.push_back(std::move(traj));
  }
  j["experts"] = std::move(experts);
  j["mask"] = std::move(mask);
  j["sources"] = std::move(sources);
  j["human_fallback"] = ts.human_fallback;
  return j;
}

}  // namespace clover::pe
