#include "mcdbf/sampling.hpp"

#include <limits>
#include <stdexcept>

namespace mcdbf {

namespace {

constexpr std::uint64_t kEnumerationCap = 1000000;

std::uint64_t checked_perm(int k, int m, const char* who) {
  const std::uint64_t total = perm_count(k, m);
  if (total > kEnumerationCap) {
    throw std::invalid_argument(std::string(who) + ": too many ordered tuples");
  }
  return total;
}

}  // namespace

std::uint64_t perm_count(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t out = 1;
  for (int i = 0; i < r; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n - i);
    if (factor != 0 && out > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw std::overflow_error("perm_count overflows 64 bits");
    }
    out *= factor;
  }
  return out;
}

ArmDistribution arm_distribution(const LabelSet& greedy, int k, double gamma) {
  if (k < 2) throw std::invalid_argument("need at least two classes");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("exploration rate must lie in (0, 1)");
  }
  const int m = greedy.size();
  if (m < 1 || m >= k) throw std::invalid_argument("need 1 <= m < k");
  for (int i = 0; i < m; ++i) {
    if (greedy[i] > k) throw std::invalid_argument("greedy label out of range");
  }
  std::vector<double> probs(static_cast<std::size_t>(k), gamma / k);
  const double boost = (1.0 - gamma) / m;
  for (int i = 0; i < m; ++i) {
    probs[static_cast<std::size_t>(greedy[i] - 1)] += boost;
  }
  return ArmDistribution(std::move(probs));
}

double superarm_prob(const ArmDistribution& dist, const LabelSet& tuple) {
  const int k = dist.k();
  const int m = tuple.size();
  if (m < 1 || m > k) throw std::invalid_argument("tuple size out of range");
  double p = 1.0;
  double used_mass = 0.0;
  for (int i = 0; i < m; ++i) {
    const int label = tuple[i];
    if (label > k) throw std::invalid_argument("label out of range");
    p *= dist.prob(label) / (1.0 - used_mass);
    used_mass += dist.prob(label);
  }
  return p;
}

LabelSet sample_superarm(const ArmDistribution& dist, int m, std::mt19937_64& rng) {
  const int k = dist.k();
  if (m < 1 || m > k) throw std::invalid_argument("tuple size out of range");
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(m));
  double remaining_mass = 1.0;
  for (int i = 0; i < m; ++i) {
    if (remaining_mass <= 0.0) {
      throw std::runtime_error("sampling mass exhausted");
    }
    const double u = uniform01(rng) * remaining_mass;
    double acc = 0.0;
    int chosen = -1;
    for (int label = 1; label <= k; ++label) {
      if (used[static_cast<std::size_t>(label - 1)]) continue;
      acc += dist.prob(label);
      if (u < acc) {
        chosen = label;
        break;
      }
    }
    if (chosen < 0) {
      // Round-off pushed u past the accumulated mass; take the last open slot.
      for (int label = k; label >= 1; --label) {
        if (!used[static_cast<std::size_t>(label - 1)]) {
          chosen = label;
          break;
        }
      }
    }
    used[static_cast<std::size_t>(chosen - 1)] = 1;
    picked.push_back(chosen);
    remaining_mass -= dist.prob(chosen);
  }
  return LabelSet(std::move(picked));
}

std::vector<LabelSet> enumerate_superarms(int k, int m) {
  if (k < 1 || m < 1 || m > k) throw std::invalid_argument("need 1 <= m <= k");
  const std::uint64_t total = checked_perm(k, m, "enumerate_superarms");
  std::vector<LabelSet> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> tuple;
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  const auto recurse = [&](auto&& self) -> void {
    if (static_cast<int>(tuple.size()) == m) {
      out.emplace_back(tuple);
      return;
    }
    for (int label = 1; label <= k; ++label) {
      if (used[static_cast<std::size_t>(label - 1)]) continue;
      used[static_cast<std::size_t>(label - 1)] = 1;
      tuple.push_back(label);
      self(self);
      tuple.pop_back();
      used[static_cast<std::size_t>(label - 1)] = 0;
    }
  };
  recurse(recurse);
  return out;
}

std::uint64_t count_containing(int y, int r, int k, int m) {
  if (k < 1 || m < 1 || m > k) throw std::invalid_argument("need 1 <= m <= k");
  if (y < 1 || y > k || r < 1 || r > k) {
    throw std::invalid_argument("label out of range");
  }
  checked_perm(k, m, "count_containing");
  const std::uint64_t shared =
      static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m - 1) *
      perm_count(k - 2, m - 2);
  if (r == y) {
    return static_cast<std::uint64_t>(m) * perm_count(k - 2, m - 1) + shared;
  }
  return shared;
}

}  // namespace mcdbf
