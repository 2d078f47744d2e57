#pragma once

#include <cstdint>
#include <vector>

namespace mcdbf {

// Labels are 1-based in every public interface and log; [1..k].
struct Example {
  std::vector<double> features;
  int label = 0;
};

// Ordered tuple of distinct labels. The order matters when computing the
// probability of drawing the tuple sequentially; membership queries treat
// it as a set.
class LabelSet {
 public:
  LabelSet() = default;
  // Throws std::invalid_argument on duplicates or labels < 1.
  explicit LabelSet(std::vector<int> members);

  int size() const noexcept { return static_cast<int>(members_.size()); }
  bool empty() const noexcept { return members_.empty(); }
  int operator[](int i) const { return members_[static_cast<std::size_t>(i)]; }
  bool contains(int label) const noexcept;
  const std::vector<int>& members() const noexcept { return members_; }

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<int> members_;
};

// One score per class; index 0 holds the score of label 1.
using ScoreVector = std::vector<double>;

}  // namespace mcdbf
