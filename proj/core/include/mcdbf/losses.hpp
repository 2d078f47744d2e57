#pragma once

#include <span>

#include "mcdbf/matrix.hpp"
#include "mcdbf/types.hpp"

namespace mcdbf {

// 1 when y lies outside the predicted set, else 0.
int partial_zero_one(int y, const LabelSet& predicted);

// Hinge on the true-class score against the mean score of the greedy top-m
// set: [1 - (Wx)_y + (1/m) sum_{i in top-m} (Wx)_i]_+. The set is always
// recomputed here with the library tie rule so losses and learners agree.
double avg_hinge(const WeightMatrix& w, std::span<const double> x, int y, int m);
double avg_hinge_from_scores(const ScoreVector& scores, int y, int m);

// avg_hinge - (partial_zero_one - <W, U>). Nonnegative whenever U is the
// subset update matrix for the same (W, x, y, m).
double loss_lower_bound_gap(const WeightMatrix& w, const UpdateMatrix& u,
                            std::span<const double> x, int y, int m);

}  // namespace mcdbf
