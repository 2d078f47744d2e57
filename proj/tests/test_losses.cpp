#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "helpers.hpp"
#include "mcdbf/learners.hpp"
#include "mcdbf/losses.hpp"
#include "mcdbf/prediction.hpp"

using namespace mcdbf;

namespace {

// Scores (1, 0, -1) realized as an actual matrix-vector product.
WeightMatrix staircase_matrix() {
  WeightMatrix w(3, 2);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  w(2, 0) = -1.0;
  w(2, 1) = -1.0;
  return w;
}

const std::vector<double> kE1 = {1.0, 0.0};

}  // namespace

TEST_CASE("partial zero-one is set membership") {
  CHECK(partial_zero_one(2, LabelSet({1, 2})) == 0);
  CHECK(partial_zero_one(3, LabelSet({1, 2})) == 1);

  for (const LabelSet& tuple : enumerate_superarms(5, 2)) {
    for (int y = 1; y <= 5; ++y) {
      const bool member = tuple[0] == y || tuple[1] == y;
      CHECK(partial_zero_one(y, tuple) == (member ? 0 : 1));
    }
  }
}

TEST_CASE("average hinge matches hand-computed cases") {
  const WeightMatrix w = staircase_matrix();
  CHECK(avg_hinge(w, kE1, 3, 2) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(avg_hinge_from_scores({1.0, 0.0, -1.0}, 3, 2) == doctest::Approx(2.5));

  const WeightMatrix zero(4, 3);
  const std::vector<double> x = {0.5, 0.25, 0.0};
  for (int y = 1; y <= 4; ++y) {
    for (int m = 1; m <= 3; ++m) CHECK(avg_hinge(zero, x, y, m) == 1.0);
  }

  CHECK_THROWS_AS(avg_hinge(w, kE1, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(avg_hinge(w, kE1, 5, 2), std::invalid_argument);
}

TEST_CASE("average hinge dominates the partial loss") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = helpers::random_int(2, 8, rng);
    const int d = helpers::random_int(1, 10, rng);
    const int m = helpers::random_int(1, k - 1, rng);
    const WeightMatrix w = helpers::random_matrix(k, d, rng);
    const std::vector<double> x = helpers::random_point(d, rng);
    const int y = helpers::random_label(k, rng);
    const double hinge = avg_hinge(w, x, y, m);
    const int indicator = partial_zero_one(y, predict_top_m(w, x, m));
    CHECK(hinge >= static_cast<double>(indicator) - 1e-12);
  }
}

TEST_CASE("gap against the inner-product lower bound") {
  const WeightMatrix w = staircase_matrix();

  SUBCASE("all-zero matrix") {
    const WeightMatrix zero(3, 2);
    const LabelSet greedy = predict_top_m(zero, kE1, 2);
    CHECK(greedy == LabelSet({1, 2}));
    const UpdateMatrix u_in =
        scaled_rows_matrix(slp_update_coefs(3, 2, 1, greedy), kE1);
    CHECK(loss_lower_bound_gap(zero, u_in, kE1, 1, 2) == 1.0);
    const UpdateMatrix u_out =
        scaled_rows_matrix(slp_update_coefs(3, 2, 3, greedy), kE1);
    CHECK(loss_lower_bound_gap(zero, u_out, kE1, 3, 2) == 0.0);
  }

  SUBCASE("missed label with separated scores") {
    const LabelSet greedy = predict_top_m(w, kE1, 2);
    const UpdateMatrix u =
        scaled_rows_matrix(slp_update_coefs(3, 2, 3, greedy), kE1);
    CHECK(inner_product(w, u) == doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(loss_lower_bound_gap(w, u, kE1, 3, 2) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }

  SUBCASE("random instances stay nonnegative") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 2000; ++trial) {
      const int k = helpers::random_int(2, 7, rng);
      const int d = helpers::random_int(1, 8, rng);
      const int m = helpers::random_int(1, k - 1, rng);
      const WeightMatrix r = helpers::random_matrix(k, d, rng);
      const std::vector<double> x = helpers::random_point(d, rng);
      const int y = helpers::random_label(k, rng);
      const LabelSet greedy = predict_top_m(r, x, m);
      const UpdateMatrix u =
          scaled_rows_matrix(slp_update_coefs(k, m, y, greedy), x);
      CHECK(loss_lower_bound_gap(r, u, x, y, m) >= -1e-12);
    }
  }
}

TEST_CASE("update inner product equals the score difference") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    const int k = helpers::random_int(2, 7, rng);
    const int d = helpers::random_int(1, 8, rng);
    const int m = helpers::random_int(1, k - 1, rng);
    const WeightMatrix w = helpers::random_matrix(k, d, rng);
    const std::vector<double> x = helpers::random_point(d, rng);
    const int y = helpers::random_label(k, rng);
    const ScoreVector s = score(w, x);
    const LabelSet greedy = top_m_from_scores(s, m);
    const UpdateMatrix u =
        scaled_rows_matrix(slp_update_coefs(k, m, y, greedy), x);

    double set_mean = 0.0;
    for (int i = 0; i < greedy.size(); ++i) {
      set_mean += s[static_cast<std::size_t>(greedy[i] - 1)];
    }
    set_mean /= static_cast<double>(m);
    const double expected = s[static_cast<std::size_t>(y - 1)] - set_mean;
    CHECK(inner_product(w, u) == doctest::Approx(expected).epsilon(1e-12));
  }
}
