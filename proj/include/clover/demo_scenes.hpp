#pragma once

#include <vector>

#include "clover/scene.hpp"

namespace clover::cli {

// Twelve bundled synthetic scenes, two variants each of: straight road,
// curve, lead-vehicle brake, lateral squeeze, off-route apron bait, and dead
// end. Every scene carries a plausible human trajectory whose sub-scores are
// filled in by the rule evaluator itself.
std::vector<scene::Scene> demo_scenes();

}  // namespace clover::cli
