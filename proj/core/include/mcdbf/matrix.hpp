#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mcdbf {

// Dense row-major matrix with one row per class and one column per feature.
// Zero-initialized on construction.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(int rows, int cols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  double& operator()(int r, int c) noexcept { return data_[index(r, c)]; }
  double operator()(int r, int c) const noexcept { return data_[index(r, c)]; }

  std::span<double> row(int r) noexcept;
  std::span<const double> row(int r) const noexcept;
  std::span<const double> data() const noexcept { return data_; }

  // *this += other. Throws std::invalid_argument on shape mismatch.
  void add(const WeightMatrix& other);

  // row(r) += coefs[r] * x for every row; sizes must match rows()/cols().
  void add_scaled_rows(std::span<const double> coefs, std::span<const double> x);

  double frobenius_sq() const noexcept;

  bool operator==(const WeightMatrix&) const = default;

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Update matrices share the weight-matrix shape and storage.
using UpdateMatrix = WeightMatrix;

// Rank-one update with per-row coefficients: U(r, j) = coefs[r] * x[j].
UpdateMatrix scaled_rows_matrix(std::span<const double> coefs,
                                std::span<const double> x);

// Frobenius inner product <A, B>.
double inner_product(const WeightMatrix& a, const WeightMatrix& b);

}  // namespace mcdbf
