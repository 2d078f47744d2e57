#include "mcdbf/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcdbf {

LabelSet::LabelSet(std::vector<int> members) : members_(std::move(members)) {
  for (int label : members_) {
    if (label < 1) throw std::invalid_argument("labels start at 1");
  }
  std::vector<int> sorted = members_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("label set has duplicates");
  }
}

bool LabelSet::contains(int label) const noexcept {
  return std::find(members_.begin(), members_.end(), label) != members_.end();
}

}  // namespace mcdbf
