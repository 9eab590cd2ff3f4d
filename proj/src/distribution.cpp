#include "clover/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "clover/rng.hpp"

namespace clover::sim {

void validate_distribution(const DiscreteProposalDistribution& dist) {
  if (dist.scores.empty()) {
    throw std::invalid_argument("distribution: empty support");
  }
  if (dist.scores.size() != dist.probs.size()) {
    throw std::invalid_argument("distribution: scores/probs size mismatch");
  }
  if (!dist.payload.empty() && dist.payload.size() != dist.scores.size()) {
    throw std::invalid_argument("distribution: payload size mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) {
    if (dist.probs[i] < 0.0) throw std::invalid_argument("distribution: negative probability");
    if (!std::isfinite(dist.scores[i]) || dist.scores[i] < 0.0 || dist.scores[i] > 1.0) {
      throw std::invalid_argument("distribution: score outside [0, 1]");
    }
    sum += dist.probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("distribution: probabilities must sum to 1");
  }
}

double expected_score(const DiscreteProposalDistribution& dist) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) acc += dist.probs[i] * dist.scores[i];
  return acc;
}

double high_score_mass(const DiscreteProposalDistribution& dist, double r_high) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.scores[i] >= r_high) acc += dist.probs[i];
  }
  return acc;
}

DiscreteProposalDistribution mix(const DiscreteProposalDistribution& mu,
                                 const DiscreteProposalDistribution& nu, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("mix: alpha outside [0, 1]");
  DiscreteProposalDistribution out;
  out.scores.reserve(mu.size() + nu.size());
  out.probs.reserve(mu.size() + nu.size());
  const bool keep_payload = !mu.payload.empty() && !nu.payload.empty();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out.scores.push_back(mu.scores[i]);
    out.probs.push_back((1.0 - alpha) * mu.probs[i]);
    if (keep_payload) out.payload.push_back(mu.payload[i]);
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    out.scores.push_back(nu.scores[i]);
    out.probs.push_back(alpha * nu.probs[i]);
    if (keep_payload) out.payload.push_back(nu.payload[i]);
  }
  return out;
}

DiscreteProposalDistribution conditional_top_fraction(const DiscreteProposalDistribution& mu,
                                                      double fraction) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw std::invalid_argument("conditional_top_fraction: fraction outside (0, 1]");
  }
  std::vector<int> order(mu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return mu.scores[static_cast<std::size_t>(a)] > mu.scores[static_cast<std::size_t>(b)];
  });
  DiscreteProposalDistribution out;
  double remaining = fraction;
  for (const int idx : order) {
    if (remaining <= 0.0) break;
    const std::size_t i = static_cast<std::size_t>(idx);
    const double take = std::min(mu.probs[i], remaining);
    if (take <= 0.0) continue;
    out.scores.push_back(mu.scores[i]);
    out.probs.push_back(take / fraction);
    if (!mu.payload.empty()) out.payload.push_back(mu.payload[i]);
    remaining -= take;
  }
  if (out.scores.empty()) {
    throw std::invalid_argument("conditional_top_fraction: distribution has no mass");
  }
  return out;
}

DiscreteProposalDistribution random_distribution(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_distribution: n must be positive");
  util::Rng rng(seed);
  DiscreteProposalDistribution out;
  out.scores.resize(static_cast<std::size_t>(n));
  out.probs.resize(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    out.scores[static_cast<std::size_t>(i)] = rng.uniform(0.0, 1.0);
    const double w = -std::log(1.0 - rng.uniform(0.0, 1.0));
    out.probs[static_cast<std::size_t>(i)] = w;
    sum += w;
  }
  for (double& p : out.probs) p /= sum;
  // Normalize the largest entry so the total is exactly 1 in floating point.
  double total = 0.0;
  for (const double p : out.probs) total += p;
  auto it = std::max_element(out.probs.begin(), out.probs.end());
  *it += 1.0 - total;
  return out;
}

}  // namespace clover::sim
