#include "mcdbf/matrix.hpp"

#include <stdexcept>

namespace mcdbf {

WeightMatrix::WeightMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix shape must be positive");
  data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

std::span<double> WeightMatrix::row(int r) noexcept {
  return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
}

std::span<const double> WeightMatrix::row(int r) const noexcept {
  return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
}

void WeightMatrix::add(const WeightMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("matrix shape mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
}

void WeightMatrix::add_scaled_rows(std::span<const double> coefs,
                                   std::span<const double> x) {
  if (static_cast<int>(coefs.size()) != rows_ ||
      static_cast<int>(x.size()) != cols_) {
    throw std::invalid_argument("coefficient or feature size mismatch");
  }
  for (int r = 0; r < rows_; ++r) {
    const double c = coefs[static_cast<std::size_t>(r)];
    if (c == 0.0) continue;
    double* out = data_.data() + index(r, 0);
    for (int j = 0; j < cols_; ++j) out[j] += c * x[static_cast<std::size_t>(j)];
  }
}

double WeightMatrix::frobenius_sq() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

UpdateMatrix scaled_rows_matrix(std::span<const double> coefs,
                                std::span<const double> x) {
  UpdateMatrix u(static_cast<int>(coefs.size()), static_cast<int>(x.size()));
  for (int r = 0; r < u.rows(); ++r) {
    const double c = coefs[static_cast<std::size_t>(r)];
    for (int j = 0; j < u.cols(); ++j) u(r, j) = c * x[static_cast<std::size_t>(j)];
  }
  return u;
}

double inner_product(const WeightMatrix& a, const WeightMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix shape mismatch");
  }
  double s = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) s += da[i] * db[i];
  return s;
}

}  // namespace mcdbf
