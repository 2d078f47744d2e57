#pragma once

#include <span>

#include "mcdbf/matrix.hpp"
#include "mcdbf/types.hpp"

namespace mcdbf {

// W * x. Throws std::invalid_argument when x does not match W's columns.
ScoreVector score(const WeightMatrix& w, std::span<const double> x);

// Greedy top-m selection on a precomputed score vector: pick the best
// remaining label m times, breaking ties toward the lower label index.
// Requires 1 <= m < k.
LabelSet top_m_from_scores(const ScoreVector& scores, int m);
int top1_from_scores(const ScoreVector& scores);

LabelSet predict_top_m(const WeightMatrix& w, std::span<const double> x, int m);
int predict_top1(const WeightMatrix& w, std::span<const double> x);

}  // namespace mcdbf
