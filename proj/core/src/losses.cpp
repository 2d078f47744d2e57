#include "mcdbf/losses.hpp"

#include <algorithm>
#include <stdexcept>

#include "mcdbf/prediction.hpp"

namespace mcdbf {

int partial_zero_one(int y, const LabelSet& predicted) {
  return predicted.contains(y) ? 0 : 1;
}

double avg_hinge_from_scores(const ScoreVector& scores, int y, int m) {
  const int k = static_cast<int>(scores.size());
  if (y < 1 || y > k) throw std::invalid_argument("label out of range");
  const LabelSet top = top_m_from_scores(scores, m);
  double set_mean = 0.0;
  for (int i = 0; i < top.size(); ++i) {
    set_mean += scores[static_cast<std::size_t>(top[i] - 1)];
  }
  set_mean /= static_cast<double>(m);
  const double raw = 1.0 - scores[static_cast<std::size_t>(y - 1)] + set_mean;
  return std::max(0.0, raw);
}

double avg_hinge(const WeightMatrix& w, std::span<const double> x, int y, int m) {
  return avg_hinge_from_scores(score(w, x), y, m);
}

double loss_lower_bound_gap(const WeightMatrix& w, const UpdateMatrix& u,
                            std::span<const double> x, int y, int m) {
  const ScoreVector s = score(w, x);
  const LabelSet top = top_m_from_scores(s, m);
  const double hinge = avg_hinge_from_scores(s, y, m);
  const double indicator = static_cast<double>(partial_zero_one(y, top));
  return hinge - (indicator - inner_product(w, u));
}

}  // namespace mcdbf
