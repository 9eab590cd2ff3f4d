#pragma once

#include <cstdint>
#include <vector>

namespace clover::sim {

// Finite distribution over proposal items. Each item carries its true
// composed score in [0, 1] and an optional payload id linking back to a
// concrete trajectory.
struct DiscreteProposalDistribution {
  std::vector<double> scores;
  std::vector<double> probs;
  std::vector<int> payload;  // empty, or one id per item

  std::size_t size() const { return scores.size(); }
};

// Checks sizes, non-negative probabilities summing to 1 within 1e-12, and
// scores inside [0, 1]. Throws std::invalid_argument on violation.
void validate_distribution(const DiscreteProposalDistribution& dist);

double expected_score(const DiscreteProposalDistribution& dist);

// Probability mass on items with score >= r_high.
double high_score_mass(const DiscreteProposalDistribution& dist, double r_high);

// Exact mixture (1 - alpha) * mu + alpha * nu on the concatenated support.
DiscreteProposalDistribution mix(const DiscreteProposalDistribution& mu,
                                 const DiscreteProposalDistribution& nu, double alpha);

// The distribution conditioned on its top score quantile: items are taken in
// descending score order until `fraction` of the mass is covered (the
// crossing item contributes partial mass), then renormalized. A natural
// enrichment target with expected score at least the source's.
DiscreteProposalDistribution conditional_top_fraction(const DiscreteProposalDistribution& mu,
                                                      double fraction);

// Seeded random distribution over n items for simulation sweeps: scores
// uniform in [0, 1], probabilities from normalized exponentials.
DiscreteProposalDistribution random_distribution(int n, std::uint64_t seed);

}  // namespace clover::sim
