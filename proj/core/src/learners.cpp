#include "mcdbf/learners.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mcdbf/data.hpp"
#include "mcdbf/losses.hpp"

namespace mcdbf {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kMcSlp: return "mc-slp";
    case Algorithm::kMcDbf: return "mc-dbf";
    case Algorithm::kBanditron: return "banditron";
    case Algorithm::kPerceptron: return "perceptron";
  }
  throw std::invalid_argument("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "mc-slp") return Algorithm::kMcSlp;
  if (name == "mc-dbf") return Algorithm::kMcDbf;
  if (name == "banditron") return Algorithm::kBanditron;
  if (name == "perceptron") return Algorithm::kPerceptron;
  throw std::invalid_argument("unknown algorithm: " + name);
}

void LearnerConfig::validate() const {
  if (k < 2) throw std::invalid_argument("need at least two classes");
  if (d < 1) throw std::invalid_argument("need at least one feature");
  if (m < 1 || m >= k) throw std::invalid_argument("need 1 <= m < k");
  const bool bandit = algorithm == Algorithm::kMcDbf || algorithm == Algorithm::kBanditron;
  if (bandit && !(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("exploration rate must lie in (0, 1)");
  }
  if (algorithm == Algorithm::kBanditron && m != 1) {
    throw std::invalid_argument("single-label bandit requires m = 1");
  }
}

OnlineLearner::OnlineLearner(const LearnerConfig& config) : config_(config) {
  config_.validate();
  w_ = WeightMatrix(config_.k, config_.d);
}

McSlpLearner::McSlpLearner(const LearnerConfig& config) : OnlineLearner(config) {}

TrialRecord McSlpLearner::process(const Example& ex) {
  const ScoreVector s = score(w_, ex.features);
  const LabelSet greedy = top_m_from_scores(s, config_.m);
  TrialRecord rec;
  rec.greedy = greedy;
  rec.top1_mistake = greedy[0] != ex.label;
  rec.set_mistake = !greedy.contains(ex.label);
  const auto coefs = slp_update_coefs(config_.k, config_.m, ex.label, greedy);
  w_.add_scaled_rows(coefs, ex.features);
  return rec;
}

McDbfLearner::McDbfLearner(const LearnerConfig& config)
    : OnlineLearner(config),
      rng_(config_.seed),
      constants_(bound_constants(config_.k, config_.m, config_.gamma)) {}

TrialRecord McDbfLearner::step(std::span<const double> x,
                               const MembershipOracle& oracle) {
  if (!oracle) throw std::invalid_argument("membership oracle is empty");
  const ScoreVector s = score(w_, x);
  const LabelSet greedy = top_m_from_scores(s, config_.m);
  const ArmDistribution dist = arm_distribution(greedy, config_.k, config_.gamma);
  const LabelSet sampled = sample_superarm(dist, config_.m, rng_);
  const double z = superarm_prob(dist, sampled);
  const bool feedback = oracle(sampled);
  const auto coefs = dbf_update_coefs(config_.k, config_.m, feedback, sampled,
                                      greedy, z, constants_.tau1, constants_.tau2);
  w_.add_scaled_rows(coefs, x);
  TrialRecord rec;
  rec.greedy = greedy;
  rec.sampled = sampled;
  rec.feedback = feedback;
  return rec;
}

TrialRecord McDbfLearner::process(const Example& ex) {
  const int y = ex.label;
  TrialRecord rec = step(ex.features, [y](const LabelSet& offered) {
    return offered.contains(y);
  });
  // Mistake bits come from the environment side; the update never sees them.
  rec.top1_mistake = rec.greedy[0] != y;
  rec.set_mistake = !rec.greedy.contains(y);
  return rec;
}

PerceptronLearner::PerceptronLearner(const LearnerConfig& config)
    : OnlineLearner(config) {}

TrialRecord PerceptronLearner::process(const Example& ex) {
  const ScoreVector s = score(w_, ex.features);
  const LabelSet greedy = top_m_from_scores(s, config_.m);
  TrialRecord rec;
  rec.greedy = greedy;
  rec.top1_mistake = greedy[0] != ex.label;
  rec.set_mistake = !greedy.contains(ex.label);
  if (rec.top1_mistake) {
    auto true_row = w_.row(ex.label - 1);
    auto pred_row = w_.row(greedy[0] - 1);
    for (std::size_t j = 0; j < ex.features.size(); ++j) {
      true_row[j] += ex.features[j];
      pred_row[j] -= ex.features[j];
    }
  }
  return rec;
}

std::unique_ptr<OnlineLearner> make_learner(const LearnerConfig& config) {
  switch (config.algorithm) {
    case Algorithm::kMcSlp:
      return std::make_unique<McSlpLearner>(config);
    case Algorithm::kMcDbf:
    case Algorithm::kBanditron:
      return std::make_unique<McDbfLearner>(config);
    case Algorithm::kPerceptron:
      return std::make_unique<PerceptronLearner>(config);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::optional<std::string> config_warning(const LearnerConfig& config) {
  config.validate();
  const bool bandit = config.algorithm == Algorithm::kMcDbf ||
                      config.algorithm == Algorithm::kBanditron;
  if (!bandit) return std::nullopt;
  const double magnitude =
      static_cast<double>(config.m) *
      std::log10(static_cast<double>(config.k) / config.gamma);
  if (magnitude <= 12.0) return std::nullopt;
  return std::string(
      "importance weights can exceed 1e12 for this (k, m, gamma); expect "
      "noisy updates and precision loss");
}

std::vector<double> slp_update_coefs(int k, int m, int y, const LabelSet& greedy) {
  if (y < 1 || y > k) throw std::invalid_argument("label out of range");
  if (greedy.size() != m) throw std::invalid_argument("greedy set size mismatch");
  std::vector<double> coefs(static_cast<std::size_t>(k), 0.0);
  coefs[static_cast<std::size_t>(y - 1)] += 1.0;
  const double share = 1.0 / static_cast<double>(m);
  for (int i = 0; i < greedy.size(); ++i) {
    coefs[static_cast<std::size_t>(greedy[i] - 1)] -= share;
  }
  return coefs;
}

std::vector<double> dbf_update_coefs(int k, int m, bool feedback,
                                     const LabelSet& sampled,
                                     const LabelSet& greedy, double z,
                                     double tau1, double tau2) {
  if (sampled.size() != m || greedy.size() != m) {
    throw std::invalid_argument("tuple size mismatch");
  }
  if (!(z > 0.0)) throw std::invalid_argument("tuple probability must be positive");
  std::vector<double> coefs(static_cast<std::size_t>(k), 0.0);
  const double hit = feedback ? 1.0 / (z * tau1) : 0.0;
  const double share = 1.0 / static_cast<double>(m);
  for (int r = 1; r <= k; ++r) {
    double c = sampled.contains(r) ? hit : 0.0;
    c -= tau2;
    if (greedy.contains(r)) c -= share;
    coefs[static_cast<std::size_t>(r - 1)] = c;
  }
  return coefs;
}

RunMetrics run_online(OnlineLearner& learner, ExampleStream& stream,
                      const RunConfig& cfg) {
  if (cfg.rounds < 0) throw std::invalid_argument("negative horizon");
  if (cfg.log_every < 1) throw std::invalid_argument("log interval must be positive");
  RunMetrics out;
  out.seed = learner.config().seed;
  const auto start = std::chrono::steady_clock::now();
  for (long long t = 1; t <= cfg.rounds; ++t) {
    std::optional<Example> ex = stream.next();
    if (!ex) {
      out.truncated = true;
      break;
    }
    const TrialRecord rec = learner.process(*ex);
    out.rounds = t;
    out.top1_mistakes += rec.top1_mistake ? 1 : 0;
    out.set_mistakes += rec.set_mistake ? 1 : 0;
    if (t % cfg.log_every == 0) {
      out.curve.push_back({t, out.top1_mistakes, out.set_mistakes});
    }
  }
  if (out.rounds > 0 &&
      (out.curve.empty() || out.curve.back().t != out.rounds)) {
    out.curve.push_back({out.rounds, out.top1_mistakes, out.set_mistakes});
  }
  out.final_error = out.rounds > 0 ? static_cast<double>(out.set_mistakes) /
                                         static_cast<double>(out.rounds)
                                   : 0.0;
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

bool deterministic_equal(const RunMetrics& a, const RunMetrics& b) {
  if (a.rounds != b.rounds || a.top1_mistakes != b.top1_mistakes ||
      a.set_mistakes != b.set_mistakes || a.final_error != b.final_error ||
      a.truncated != b.truncated || a.seed != b.seed) {
    return false;
  }
  if (a.curve.size() != b.curve.size()) return false;
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    if (a.curve[i].t != b.curve[i].t ||
        a.curve[i].top1_mistakes != b.curve[i].top1_mistakes ||
        a.curve[i].set_mistakes != b.curve[i].set_mistakes) {
      return false;
    }
  }
  return true;
}

}  // namespace mcdbf
