#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mcdbf/bounds.hpp"
#include "mcdbf/matrix.hpp"
#include "mcdbf/prediction.hpp"
#include "mcdbf/sampling.hpp"
#include "mcdbf/types.hpp"

namespace mcdbf {

enum class Algorithm {
  kMcSlp,        // full-information set-valued learner
  kMcDbf,        // bandit set-valued learner (membership bit only)
  kBanditron,    // classic single-label bandit; equals kMcDbf at m = 1
  kPerceptron,   // full-information multiclass perceptron
};

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct LearnerConfig {
  Algorithm algorithm = Algorithm::kMcDbf;
  int k = 0;
  int d = 0;
  int m = 1;
  double gamma = 0.0;   // exploration rate; bandit learners only
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on an unusable combination.
  void validate() const;
};

// What one round produced. `sampled` and `feedback` are present only for
// bandit learners. Mistake bits always refer to the greedy set: set_mistake
// is 1 exactly when the true label falls outside it.
struct TrialRecord {
  LabelSet greedy;
  std::optional<LabelSet> sampled;
  std::optional<bool> feedback;  // membership answer for the sampled set
  bool top1_mistake = false;     // highest-scoring label != true label
  bool set_mistake = false;      // greedy set misses the true label
};

// The only question a bandit learner may ask about the truth: does the
// offered set contain it?
using MembershipOracle = std::function<bool(const LabelSet&)>;

class OnlineLearner {
 public:
  virtual ~OnlineLearner() = default;

  // One full-information round.
  virtual TrialRecord process(const Example& ex) = 0;

  const WeightMatrix& weights() const noexcept { return w_; }
  const LearnerConfig& config() const noexcept { return config_; }

 protected:
  explicit OnlineLearner(const LearnerConfig& config);

  LearnerConfig config_;
  WeightMatrix w_;
};

// Full-information learner. Every round moves the true row toward x and
// each greedy row away by 1/m of it.
class McSlpLearner : public OnlineLearner {
 public:
  explicit McSlpLearner(const LearnerConfig& config);
  TrialRecord process(const Example& ex) override;
};

// Bandit learner: explores an ordered m-tuple and learns from the single
// membership bit via an importance-weighted unbiased surrogate update.
class McDbfLearner : public OnlineLearner {
 public:
  explicit McDbfLearner(const LearnerConfig& config);

  // Core round: never sees the label, only asks the oracle once.
  TrialRecord step(std::span<const double> x, const MembershipOracle& oracle);

  // Convenience wrapper that also fills the top-1 mistake bit.
  TrialRecord process(const Example& ex) override;

  std::mt19937_64& rng() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
  BoundConstants constants_;
};

// Classic multiclass perceptron: on a top-1 mistake, add x to the true row
// and subtract it from the predicted row.
class PerceptronLearner : public OnlineLearner {
 public:
  explicit PerceptronLearner(const LearnerConfig& config);
  TrialRecord process(const Example& ex) override;
};

std::unique_ptr<OnlineLearner> make_learner(const LearnerConfig& config);

// Advisory check for bandit configurations: the importance weight of one
// round can reach (k/gamma)^m / tau1, so warn when (k/gamma)^m > 1e12 and
// double precision starts to erode.
std::optional<std::string> config_warning(const LearnerConfig& config);

// Per-row coefficients of the full-information update: coefs[y-1] gets +1,
// each greedy row gets -1/m, and the update matrix is the outer product of
// coefs with x. Applied every round, no mistake gating.
std::vector<double> slp_update_coefs(int k, int m, int y, const LabelSet& greedy);

// Per-row coefficients of the bandit update for one observed round.
std::vector<double> dbf_update_coefs(int k, int m, bool feedback,
                                     const LabelSet& sampled,
                                     const LabelSet& greedy, double z,
                                     double tau1, double tau2);

struct RunConfig {
  long long rounds = 0;
  long long log_every = 1000;
};

struct CheckpointRow {
  long long t = 0;
  long long top1_mistakes = 0;
  long long set_mistakes = 0;
};

struct RunMetrics {
  std::vector<CheckpointRow> curve;
  long long rounds = 0;
  long long top1_mistakes = 0;
  long long set_mistakes = 0;
  double final_error = 0.0;  // set_mistakes / rounds; 0 when rounds == 0
  bool truncated = false;    // stream ran dry before `rounds`
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
};

// Drives a learner over a stream for cfg.rounds rounds, checkpointing every
// cfg.log_every rounds plus once at the end.
RunMetrics run_online(OnlineLearner& learner, ExampleStream& stream,
                      const RunConfig& cfg);

// Equality ignoring wall-clock time; used by replay checks.
bool deterministic_equal(const RunMetrics& a, const RunMetrics& b);

}  // namespace mcdbf
