#include "mcdbf/prediction.hpp"

#include <stdexcept>
#include <vector>

namespace mcdbf {

ScoreVector score(const WeightMatrix& w, std::span<const double> x) {
  if (static_cast<int>(x.size()) != w.cols()) {
    throw std::invalid_argument("feature size does not match matrix columns");
  }
  ScoreVector s(static_cast<std::size_t>(w.rows()), 0.0);
  for (int r = 0; r < w.rows(); ++r) {
    auto row = w.row(r);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    s[static_cast<std::size_t>(r)] = acc;
  }
  return s;
}

LabelSet top_m_from_scores(const ScoreVector& scores, int m) {
  const int k = static_cast<int>(scores.size());
  if (m < 1 || m >= k) throw std::invalid_argument("need 1 <= m < k");
  std::vector<char> used(scores.size(), 0);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    int best = -1;
    for (int r = 0; r < k; ++r) {
      if (used[static_cast<std::size_t>(r)]) continue;
      if (best < 0 || scores[static_cast<std::size_t>(r)] >
                          scores[static_cast<std::size_t>(best)]) {
        best = r;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    picked.push_back(best + 1);
  }
  return LabelSet(std::move(picked));
}

int top1_from_scores(const ScoreVector& scores) {
  if (scores.empty()) throw std::invalid_argument("empty score vector");
  int best = 0;
  for (int r = 1; r < static_cast<int>(scores.size()); ++r) {
    if (scores[static_cast<std::size_t>(r)] > scores[static_cast<std::size_t>(best)]) {
      best = r;
    }
  }
  return best + 1;
}

LabelSet predict_top_m(const WeightMatrix& w, std::span<const double> x, int m) {
  return top_m_from_scores(score(w, x), m);
}

int predict_top1(const WeightMatrix& w, std::span<const double> x) {
  return top1_from_scores(score(w, x));
}

}  // namespace mcdbf
