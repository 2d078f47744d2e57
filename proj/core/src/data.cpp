#include "mcdbf/data.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <fmt/os.h>

#include "mcdbf/sampling.hpp"

namespace mcdbf {

namespace {

// Acceptance threshold on the unit-row margin and the noise scale; together
// they set the rejection rate and the planted complexity.
constexpr double kUnitMargin = 0.75;
constexpr double kNoiseSpread = 0.25;
constexpr int kRejectionBudget = 10000;

constexpr double kPi = 3.14159265358979323846;

double gaussian01(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps the log finite
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Uniform label in [1, k].
int uniform_label(std::mt19937_64& rng, int k) {
  const int i = static_cast<int>(uniform01(rng) * static_cast<double>(k));
  return 1 + std::min(k - 1, i);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Random orthonormal rows via Gram-Schmidt on Gaussian draws.
WeightMatrix orthonormal_rows(int k, int d, std::mt19937_64& rng) {
  WeightMatrix out(k, d);
  for (int r = 0; r < k; ++r) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= kRejectionBudget) {
        throw std::runtime_error("could not orthonormalize class anchors");
      }
      auto row = out.row(r);
      for (int j = 0; j < d; ++j) row[j] = gaussian01(rng);
      for (int p = 0; p < r; ++p) {
        const double proj = dot(out.row(p), row);
        auto prev = out.row(p);
        for (int j = 0; j < d; ++j) row[j] -= proj * prev[j];
      }
      const double norm = std::sqrt(dot(row, row));
      if (norm > 1e-8) {
        for (int j = 0; j < d; ++j) row[j] /= norm;
        break;
      }
    }
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t s) {
  // splitmix64 finalizer
  s += 0x9e3779b97f4a7c15ULL;
  s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
  s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
  return s ^ (s >> 31);
}

}  // namespace

void SynthConfig::validate() const {
  if (k < 2) throw std::invalid_argument("need at least two classes");
  if (d < k) throw std::invalid_argument("need d >= k for the planted separator");
  if (!(margin >= 1.0) || !std::isfinite(margin)) {
    throw std::invalid_argument("margin must be at least 1");
  }
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) {
    throw std::invalid_argument("noise rate must lie in [0, 1)");
  }
}

SyntheticStream::SyntheticStream(const SynthConfig& config)
    : SyntheticStream(config, config.seed) {}

SyntheticStream::SyntheticStream(const SynthConfig& config,
                                 std::uint64_t stream_seed)
    : config_(config) {
  config_.validate();
  std::mt19937_64 anchor_rng(config_.seed);
  anchors_ = orthonormal_rows(config_.k, config_.d, anchor_rng);
  const double scale = 2.0 * config_.margin / kUnitMargin;
  planted_ = WeightMatrix(config_.k, config_.d);
  for (int r = 0; r < config_.k; ++r) {
    auto src = anchors_.row(r);
    auto dst = planted_.row(r);
    for (int j = 0; j < config_.d; ++j) dst[j] = scale * src[j];
  }
  // Mixing decorrelates the example stream from the anchor draws even when
  // stream_seed equals config.seed.
  rng_.seed(mix_seed(stream_seed));
}

std::optional<Example> SyntheticStream::next() {
  const int k = config_.k;
  const int d = config_.d;
  for (int attempt = 0; attempt < kRejectionBudget; ++attempt) {
    const int y = uniform_label(rng_, k);
    std::vector<double> x(static_cast<std::size_t>(d));
    const double coord_sigma = kNoiseSpread / std::sqrt(static_cast<double>(d));
    auto anchor = anchors_.row(y - 1);
    for (int j = 0; j < d; ++j) {
      x[static_cast<std::size_t>(j)] = anchor[j] + coord_sigma * gaussian01(rng_);
    }
    const double norm = std::sqrt(dot(x, x));
    if (norm < 1e-12) continue;
    for (double& v : x) v /= norm;
    // Margin of the unit anchors on the normalized example.
    const double sy = dot(anchors_.row(y - 1), x);
    double best_other = -2.0;
    for (int r = 0; r < k; ++r) {
      if (r == y - 1) continue;
      best_other = std::max(best_other, dot(anchors_.row(r), x));
    }
    if (sy - best_other < kUnitMargin) continue;
    Example ex;
    ex.features = std::move(x);
    ex.label = y;
    if (config_.noise_rate > 0.0 && uniform01(rng_) < config_.noise_rate) {
      const int shift =
          1 + std::min(k - 2, static_cast<int>(uniform01(rng_) *
                                               static_cast<double>(k - 1)));
      ex.label = 1 + (y - 1 + shift) % k;
    }
    return ex;
  }
  throw std::runtime_error(
      "rejection budget exhausted while drawing a separable example");
}

SeparableSample generate_separable(const SynthConfig& config, long long count) {
  if (count < 0) throw std::invalid_argument("negative sample count");
  SyntheticStream stream(config);
  SeparableSample out;
  out.planted = stream.planted();
  out.examples.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.examples.push_back(*stream.next());
  return out;
}

MemoryStream::MemoryStream(std::vector<Example> examples, bool cycle)
    : examples_(std::move(examples)), cycle_(cycle) {
  if (cycle_ && examples_.empty()) {
    throw std::invalid_argument("cannot cycle an empty example list");
  }
}

std::optional<Example> MemoryStream::next() {
  if (pos_ >= examples_.size()) {
    if (!cycle_) return std::nullopt;
    pos_ = 0;
  }
  return examples_[pos_++];
}

std::optional<long long> MemoryStream::size() const {
  if (cycle_) return std::nullopt;
  return static_cast<long long>(examples_.size());
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& text, const std::string& path, int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw std::runtime_error(
        fmt::format("{}:{}: not a finite number: '{}'", path, line, text));
  }
  return v;
}

long parse_int(const std::string& text, const std::string& path, int line) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw std::runtime_error(
        fmt::format("{}:{}: not an integer: '{}'", path, line, text));
  }
  return v;
}

}  // namespace

FeatureFile load_features(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("{}: cannot open", path));
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(fmt::format("{}: missing 'k,d' header", path));
  }
  auto header = split_fields(line);
  if (header.size() != 2) {
    throw std::runtime_error(fmt::format("{}:1: header must be 'k,d'", path));
  }
  FeatureFile file;
  file.k = static_cast<int>(parse_int(header[0], path, 1));
  file.d = static_cast<int>(parse_int(header[1], path, 1));
  if (file.k < 2 || file.d < 1) {
    throw std::runtime_error(fmt::format("{}:1: invalid shape {}x{}", path,
                                         file.k, file.d));
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() && in.eof()) break;
    auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != file.d + 1) {
      throw std::runtime_error(fmt::format("{}:{}: expected {} fields, got {}",
                                           path, lineno, file.d + 1,
                                           fields.size()));
    }
    Example ex;
    ex.label = static_cast<int>(parse_int(fields[0], path, lineno));
    if (ex.label < 1 || ex.label > file.k) {
      throw std::runtime_error(
          fmt::format("{}:{}: label {} outside [1, {}]", path, lineno,
                      ex.label, file.k));
    }
    ex.features.resize(static_cast<std::size_t>(file.d));
    for (int j = 0; j < file.d; ++j) {
      ex.features[static_cast<std::size_t>(j)] =
          parse_double(fields[static_cast<std::size_t>(j + 1)], path, lineno);
    }
    // Keep every example inside the unit ball without inflating short ones.
    const double norm = std::sqrt(dot(ex.features, ex.features));
    if (norm > 1.0) {
      for (double& v : ex.features) v /= norm;
    }
    file.examples.push_back(std::move(ex));
  }
  return file;
}

void write_features(const std::string& path, int k, int d,
                    const std::vector<Example>& examples) {
  if (k < 2 || d < 1) throw std::invalid_argument("invalid shape");
  auto out = fmt::output_file(path);
  out.print("{},{}\n", k, d);
  for (const Example& ex : examples) {
    if (static_cast<int>(ex.features.size()) != d) {
      throw std::invalid_argument("example dimension mismatch");
    }
    if (ex.label < 1 || ex.label > k) {
      throw std::invalid_argument("example label out of range");
    }
    out.print("{}", ex.label);
    for (double v : ex.features) out.print(",{}", v);
    out.print("\n");
  }
}

}  // namespace mcdbf
