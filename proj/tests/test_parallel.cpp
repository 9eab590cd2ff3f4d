#include <numeric>
#include <vector>

#include <doctest.h>

#include "clover/demo_scenes.hpp"
#include "clover/evaluator.hpp"
#include "clover/parallel.hpp"
#include "clover/pseudo_expert.hpp"

using namespace clover;

TEST_CASE("parallel_for covers every index exactly once") {
  for (const int jobs : {0, 1, 2, 4, 8}) {
    std::vector<int> hits(1000, 0);
    util::parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1000);
    for (const int h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_AS(util::parallel_for(4, -1, [](std::size_t) {}), std::invalid_argument);

  // Empty ranges are fine.
  bool ran = false;
  util::parallel_for(0, 8, [&](std::size_t) { ran = true; });
  CHECK_FALSE(ran);
}

TEST_CASE("parallel evaluation matches the serial reference") {
  const auto scenes = cli::demo_scenes();
  REQUIRE(scenes.size() >= 3);
  const eval::EvaluatorConfig cfg;
  const pe::FamilyConfig fam_cfg;

  for (std::size_t si = 0; si < 3; ++si) {
    const auto& scene = scenes[si];
    const auto cands = pe::generate_families(scene, fam_cfg, 17);
    std::vector<scene::Trajectory> trajs;
    for (std::size_t i = 0; i < cands.size(); i += 3) trajs.push_back(cands[i].traj);

    const auto serial = eval::evaluate_batch(scene, trajs, cfg, 1);
    const auto parallel = eval::evaluate_batch(scene, trajs, cfg, 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      for (std::size_t c = 0; c < eval::SubScores::kCount; ++c) {
        // Bitwise equality: both paths run the same arithmetic per slot.
        CHECK(serial[i].get(c) == parallel[i].get(c));
      }
    }
  }
}

TEST_CASE("parallel pipeline output is schedule independent") {
  const auto scenes = cli::demo_scenes();
  const auto& scene = scenes[0];
  const pe::FamilyConfig cfg;
  const eval::EvaluatorConfig eval_cfg;

  const auto serial = pe::run_pipeline(scene, cfg, eval_cfg, 1, 1);
  const auto parallel = pe::run_pipeline(scene, cfg, eval_cfg, 1, 8);

  REQUIRE(serial.kept.size() == parallel.kept.size());
  for (std::size_t i = 0; i < serial.kept.size(); ++i) {
    CHECK(serial.kept[i].cand.index == parallel.kept[i].cand.index);
    CHECK(serial.kept[i].pdms == parallel.kept[i].pdms);
    CHECK(serial.kept[i].epdms == parallel.kept[i].epdms);
  }
  REQUIRE(serial.training.sources.size() == parallel.training.sources.size());
  for (std::size_t i = 0; i < serial.training.sources.size(); ++i) {
    CHECK(serial.training.sources[i] == parallel.training.sources[i]);
  }
}
