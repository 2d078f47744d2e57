#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mcdbf/matrix.hpp"
#include "mcdbf/sampling.hpp"

namespace helpers {

inline mcdbf::WeightMatrix random_matrix(int k, int d, std::mt19937_64& rng,
                                         double scale = 1.0) {
  mcdbf::WeightMatrix w(k, d);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < d; ++c) {
      w(r, c) = scale * (2.0 * mcdbf::uniform01(rng) - 1.0);
    }
  }
  return w;
}

// Uniform in the cube, then pulled back into the unit ball.
inline std::vector<double> random_point(int d, std::mt19937_64& rng) {
  std::vector<double> x(static_cast<std::size_t>(d));
  double norm_sq = 0.0;
  for (double& v : x) {
    v = 2.0 * mcdbf::uniform01(rng) - 1.0;
    norm_sq += v * v;
  }
  const double norm = std::sqrt(norm_sq);
  if (norm > 1.0) {
    for (double& v : x) v /= norm;
  }
  return x;
}

inline int random_label(int k, std::mt19937_64& rng) {
  const int i = static_cast<int>(mcdbf::uniform01(rng) * static_cast<double>(k));
  return 1 + std::min(k - 1, i);
}

inline int random_int(int lo, int hi, std::mt19937_64& rng) {
  return lo + std::min(hi - lo,
                       static_cast<int>(mcdbf::uniform01(rng) *
                                        static_cast<double>(hi - lo + 1)));
}

// Fresh scratch directory under the system temp root.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir =
      std::filesystem::temp_directory_path() / ("mcdbf_tests_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace helpers
