#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mcdbf/matrix.hpp"
#include "mcdbf/types.hpp"

namespace mcdbf {

// A (possibly infinite) sequence of examples. next() returns nullopt when
// exhausted; finite streams report their length via size().
class ExampleStream {
 public:
  virtual ~ExampleStream() = default;
  virtual std::optional<Example> next() = 0;
  virtual std::optional<long long> size() const { return std::nullopt; }
};

struct SynthConfig {
  int k = 9;
  int d = 400;
  double margin = 1.0;        // >= 1; scales the planted separator
  double noise_rate = 0.0;    // fraction of labels flipped to a random other label
  std::uint64_t seed = 0;

  // Throws std::invalid_argument; the construction needs d >= k.
  void validate() const;

  bool operator==(const SynthConfig&) const = default;
};

// Linearly separable synthetic source. The planted matrix scores the true
// class above every other class by at least 2 * margin on every clean
// example (unit feature norm); the factor of two makes the planted matrix's
// average hinge loss vanish for every set size m >= 2, not just its top-1
// margin. Label noise, if any, flips labels after the fact, so the planted
// matrix stays fixed.
class SyntheticStream : public ExampleStream {
 public:
  // The planted matrix depends only on config.seed; the example sequence is
  // drawn from stream_seed, so several independent streams can share one
  // separator.
  explicit SyntheticStream(const SynthConfig& config);
  SyntheticStream(const SynthConfig& config, std::uint64_t stream_seed);

  std::optional<Example> next() override;

  const WeightMatrix& planted() const noexcept { return planted_; }
  const SynthConfig& config() const noexcept { return config_; }

 private:
  SynthConfig config_;
  WeightMatrix anchors_;      // orthonormal class rows
  WeightMatrix planted_;      // anchors scaled to the certified margin
  std::mt19937_64 rng_;
};

// Materialized separable sample plus the matrix that certifies it.
struct SeparableSample {
  std::vector<Example> examples;
  WeightMatrix planted;
};

SeparableSample generate_separable(const SynthConfig& config, long long count);

// In-memory stream over a fixed vector, optionally cycling forever.
class MemoryStream : public ExampleStream {
 public:
  explicit MemoryStream(std::vector<Example> examples, bool cycle = false);

  std::optional<Example> next() override;
  std::optional<long long> size() const override;

 private:
  std::vector<Example> examples_;
  std::size_t pos_ = 0;
  bool cycle_ = false;
};

struct FeatureFile {
  int k = 0;
  int d = 0;
  std::vector<Example> examples;
};

// CSV with header "k,d" then one "label,f1,...,fd" row per example. Features
// are scaled by 1/max(1, ||x||) on load so every example has norm <= 1.
FeatureFile load_features(const std::string& path);

// Inverse of load_features modulo the normalization (rows are written as-is).
void write_features(const std::string& path, int k, int d,
                    const std::vector<Example>& examples);

}  // namespace mcdbf
