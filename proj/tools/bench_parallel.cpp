#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "clover/demo_scenes.hpp"
#include "clover/evaluator.hpp"
#include "clover/parallel.hpp"
#include "clover/pseudo_expert.hpp"
#include "clover/run_config.hpp"
#include "clover/subscores.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

// Times batch sub-score evaluation of every demo-scene candidate set on the
// serial path and on the OpenMP path, and checks that both produce identical
// scores.
int main(int argc, char** argv) {
  int jobs = 4;
  int repeats = 3;
  if (argc > 1) jobs = std::atoi(argv[1]);
  if (argc > 2) repeats = std::atoi(argv[2]);
  if (jobs < 2) jobs = 2;

  const clover::cli::RunConfig cfg;
  std::printf("openmp=%s jobs=%d repeats=%d\n",
              clover::util::openmp_enabled() ? "yes" : "no", jobs, repeats);

  double serial_total = 0.0;
  double parallel_total = 0.0;
  bool all_equal = true;

  for (const clover::scene::Scene& scn : clover::cli::demo_scenes()) {
    const std::vector<clover::pe::Candidate> cands =
        clover::pe::generate_families(scn, cfg.families, cfg.seed);
    std::vector<clover::scene::Trajectory> trajs;
    trajs.reserve(cands.size());
    for (const clover::pe::Candidate& c : cands) trajs.push_back(c.traj);

    std::vector<clover::eval::SubScores> serial, parallel;
    double serial_best = 1e9;
    double parallel_best = 1e9;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = std::chrono::steady_clock::now();
      serial = clover::eval::evaluate_batch(scn, trajs, cfg.evaluator, 1);
      serial_best = std::min(serial_best, seconds_since(t0));

      t0 = std::chrono::steady_clock::now();
      parallel = clover::eval::evaluate_batch(scn, trajs, cfg.evaluator, jobs);
      parallel_best = std::min(parallel_best, seconds_since(t0));
    }
    serial_total += serial_best;
    parallel_total += parallel_best;

    bool equal = serial.size() == parallel.size();
    for (std::size_t i = 0; equal && i < serial.size(); ++i) {
      for (std::size_t c = 0; c < clover::eval::SubScores::kCount; ++c) {
        if (serial[i].get(c) != parallel[i].get(c)) equal = false;
      }
    }
    all_equal = all_equal && equal;
    std::printf("%-18s n=%3zu serial=%8.3f ms parallel=%8.3f ms speedup=%5.2fx equal=%s\n",
                scn.id.c_str(), trajs.size(), serial_best * 1e3, parallel_best * 1e3,
                serial_best / parallel_best, equal ? "yes" : "NO");
  }

  std::printf("total: serial=%.3f ms parallel=%.3f ms speedup=%.2fx\n", serial_total * 1e3,
              parallel_total * 1e3, serial_total / parallel_total);
  if (!all_equal) {
    std::printf("mismatch between serial and parallel results\n");
    return 1;
  }
  return 0;
}
