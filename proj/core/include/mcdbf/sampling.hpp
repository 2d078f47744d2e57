#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mcdbf/types.hpp"

namespace mcdbf {

// Falling factorial n * (n-1) * ... * (n-r+1). 1 when r == 0; 0 when r < 0
// or r > n. Throws std::overflow_error if the product leaves 64 bits.
std::uint64_t perm_count(int n, int r);

// 53-bit uniform draw in [0, 1).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Per-label exploration distribution: (1-gamma)/m extra mass on each greedy
// label on top of a uniform gamma/k floor.
class ArmDistribution {
 public:
  ArmDistribution() = default;
  int k() const noexcept { return static_cast<int>(probs_.size()); }
  double prob(int label) const { return probs_[static_cast<std::size_t>(label - 1)]; }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  explicit ArmDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;

  friend ArmDistribution arm_distribution(const LabelSet&, int, double);
};

// Requires 0 < gamma < 1 and a greedy set of size m < k.
ArmDistribution arm_distribution(const LabelSet& greedy, int k, double gamma);

// Probability of drawing the ordered tuple by sequential sampling without
// replacement: each factor is the arm probability renormalized over the
// labels still available. Order-sensitive; duplicate labels are rejected.
double superarm_prob(const ArmDistribution& dist, const LabelSet& tuple);

// Draw m labels sequentially without replacement (inverse-CDF walk over the
// remaining mass at every step). Deterministic given the engine state.
LabelSet sample_superarm(const ArmDistribution& dist, int m, std::mt19937_64& rng);

// All Perm(k, m) ordered m-tuples of distinct labels, lexicographic order.
// Refuses (std::invalid_argument) when Perm(k, m) exceeds 1e6.
std::vector<LabelSet> enumerate_superarms(int k, int m);

// Closed-form count of ordered m-tuples from [k] that contain both y and r:
// m * Perm(k-2, m-1) when r == y, plus m * (m-1) * Perm(k-2, m-2) always.
// Same size guard as enumerate_superarms.
std::uint64_t count_containing(int y, int r, int k, int m);

}  // namespace mcdbf
