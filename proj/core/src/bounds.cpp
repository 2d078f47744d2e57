#include "mcdbf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcdbf/data.hpp"
#include "mcdbf/losses.hpp"
#include "mcdbf/prediction.hpp"
#include "mcdbf/sampling.hpp"

namespace mcdbf {

namespace {

void check_shape(int k, int m) {
  if (k < 2) throw std::invalid_argument("need at least two classes");
  if (m < 1 || m >= k) throw std::invalid_argument("need 1 <= m < k");
}

double int_pow(double base, int e) {
  double out = 1.0;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

// The constants blow past double precision long before they are useful;
// refuse configurations where k^m * Perm(k, m) leaves the exact range.
void check_counting_range(int k, int m) {
  const double product =
      int_pow(static_cast<double>(k), m) * static_cast<double>(perm_count(k, m));
  if (product > 1e15) {
    throw std::invalid_argument("k and m too large for exact bound constants");
  }
}

}  // namespace

BoundConstants bound_constants(int k, int m, double gamma) {
  check_shape(k, m);
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("exploration rate must lie in (0, 1)");
  }
  check_counting_range(k, m);
  BoundConstants c;
  c.tau1 = static_cast<double>(m) * static_cast<double>(perm_count(k - 2, m - 1));
  c.tau2 = static_cast<double>(m - 1) / static_cast<double>(k - m);
  c.lambda1 = 2.0 / c.tau1;
  const double km = static_cast<double>(k) * static_cast<double>(m);
  const double tuples = static_cast<double>(perm_count(k, m));
  c.lambda2 = static_cast<double>(m) * int_pow(static_cast<double>(k), m) * tuples /
                  (int_pow(gamma, m) * c.tau1 * c.tau1) -
              2.0 * static_cast<double>(m) * c.tau2 / c.tau1 - 2.0 / c.tau1 +
              static_cast<double>(k) *
                  (c.tau2 * c.tau2 + 1.0 / km + 2.0 * c.tau2 / static_cast<double>(k));
  return c;
}

double expected_mistake_bound(const MistakeBoundInputs& in) {
  const BoundConstants c = bound_constants(in.k, in.m, in.gamma);
  if (in.rounds < 0) throw std::invalid_argument("negative horizon");
  if (in.complexity < 0.0 || in.hinge_sum < 0.0) {
    throw std::invalid_argument("negative complexity or loss");
  }
  const double t = static_cast<double>(in.rounds);
  const double d = in.complexity;
  const double r = in.hinge_sum;
  return r + std::sqrt(c.lambda1 * d * r / 2.0) +
         3.0 * std::max(c.lambda1 * d / 2.0,
                        std::sqrt((c.lambda2 + 1.0) * d * t / 2.0)) +
         in.gamma * t;
}

double optimal_gamma(int k, int m, double complexity, long long rounds) {
  check_shape(k, m);
  if (rounds < 1) throw std::invalid_argument("horizon must be positive");
  if (complexity < 0.0) throw std::invalid_argument("negative complexity");
  check_counting_range(k, m);
  const double tau1 =
      static_cast<double>(m) * static_cast<double>(perm_count(k - 2, m - 1));
  const double numerator = 9.0 * int_pow(static_cast<double>(m), 3) *
                           int_pow(static_cast<double>(k), m) *
                           static_cast<double>(perm_count(k, m)) * complexity;
  const double denominator = 8.0 * tau1 * tau1 * static_cast<double>(rounds);
  const double raw = std::pow(numerator / denominator,
                              1.0 / static_cast<double>(m + 2));
  return std::clamp(raw, 1e-6, 1.0 - 1e-6);
}

double update_second_moment_bound(const BoundConstants& c, double x_norm_sq,
                                  bool greedy_missed) {
  if (x_norm_sq < 0.0) throw std::invalid_argument("negative squared norm");
  double out = x_norm_sq * c.lambda2;
  if (greedy_missed) out += c.lambda1 * x_norm_sq;
  return out;
}

CertificateResult separability_certificate(const WeightMatrix& w,
                                           ExampleStream& stream, int m,
                                           long long rounds) {
  check_shape(w.rows(), m);
  CertificateResult out;
  out.complexity = 2.0 * w.frobenius_sq();
  out.min_margin = std::numeric_limits<double>::infinity();
  while (rounds < 0 || out.rounds < rounds) {
    const std::optional<Example> ex = stream.next();
    if (!ex) break;
    const ScoreVector s = score(w, ex->features);
    const LabelSet top = top_m_from_scores(s, m);
    out.set_mistakes += partial_zero_one(ex->label, top);
    out.hinge_sum += avg_hinge_from_scores(s, ex->label, m);
    double best_other = -std::numeric_limits<double>::infinity();
    for (int r = 1; r <= w.rows(); ++r) {
      if (r == ex->label) continue;
      best_other = std::max(best_other, s[static_cast<std::size_t>(r - 1)]);
    }
    out.min_margin = std::min(
        out.min_margin, s[static_cast<std::size_t>(ex->label - 1)] - best_other);
    ++out.rounds;
  }
  if (out.rounds == 0) out.min_margin = 0.0;
  return out;
}

}  // namespace mcdbf
