#pragma once

#include <optional>

#include "mcdbf/matrix.hpp"
#include "mcdbf/types.hpp"

namespace mcdbf {

class ExampleStream;

// Scale constants shared by the bandit update and its analysis.
//
//   tau1    = m * Perm(k-2, m-1)       importance-weight normalizer
//   tau2    = (m-1) / (k-m)            off-set correction
//   lambda1 = 2 / tau1                 coefficient on the mistake indicator
//   lambda2                             constant part of the second-moment bound
struct BoundConstants {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
};

// Requires k >= 2, 1 <= m < k, 0 < gamma < 1.
BoundConstants bound_constants(int k, int m, double gamma);

// Inputs for the expected-mistake bound of the bandit learner.
//   complexity  D = 2 * ||W*||_F^2 for a fixed competitor W*
//   hinge_sum   cumulative average-hinge loss of that competitor
struct MistakeBoundInputs {
  int k = 0;
  int m = 0;
  double gamma = 0.0;
  long long rounds = 0;
  double complexity = 0.0;
  double hinge_sum = 0.0;
};

// Ceiling on the expected number of rounds whose greedy label set misses
// the true label.
double expected_mistake_bound(const MistakeBoundInputs& in);

// Exploration rate minimizing the dominant terms of the mistake bound for a
// given horizon and competitor complexity; clipped into (1e-6, 1 - 1e-6).
double optimal_gamma(int k, int m, double complexity, long long rounds);

// Ceiling on E||U~||_F^2 for one update given the example norm and whether
// the greedy set missed the true label.
double update_second_moment_bound(const BoundConstants& c, double x_norm_sq,
                                  bool greedy_missed);

// Aggregate evidence that a fixed matrix separates a stream.
struct CertificateResult {
  long long rounds = 0;
  long long set_mistakes = 0;   // rounds where the greedy set missed the label
  double hinge_sum = 0.0;       // cumulative average hinge loss at the given m
  double complexity = 0.0;      // 2 * ||W||_F^2
  double min_margin = 0.0;      // min over rounds of score(y) - best other score

  // The separability condition proper: every true label beats every other
  // label by at least 1.
  bool separable() const noexcept { return rounds > 0 && min_margin >= 1.0; }
};

// Replays the stream under the fixed matrix, accumulating hinge losses, set
// mistakes, and the worst pairwise margin. Consumes up to `rounds` examples
// (all of them if rounds < 0).
CertificateResult separability_certificate(const WeightMatrix& w,
                                           ExampleStream& stream, int m,
                                           long long rounds = -1);

}  // namespace mcdbf
