#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "mcdbf/bounds.hpp"
#include "mcdbf/data.hpp"
#include "mcdbf/learners.hpp"

using namespace mcdbf;

namespace {

double norm_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::string write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  out.close();
  return path.string();
}

}  // namespace

TEST_CASE("synthetic configuration validation") {
  SynthConfig cfg;
  cfg.k = 4;
  cfg.d = 8;
  CHECK_NOTHROW(cfg.validate());

  SynthConfig bad = cfg;
  bad.k = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.d = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.margin = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.noise_rate = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.noise_rate = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("synthetic streams are deterministic functions of their seeds") {
  SynthConfig cfg;
  cfg.k = 5;
  cfg.d = 9;
  cfg.seed = 1001;

  SyntheticStream a(cfg);
  SyntheticStream b(cfg);
  for (int t = 0; t < 50; ++t) {
    const Example ea = *a.next();
    const Example eb = *b.next();
    CHECK(ea.label == eb.label);
    CHECK(ea.features == eb.features);
  }

  SUBCASE("the planted matrix ignores the stream seed") {
    SyntheticStream c(cfg, 999);
    SyntheticStream d(cfg, 123456);
    CHECK(c.planted() == d.planted());
    CHECK(c.planted() == a.planted());
    bool any_differ = false;
    for (int t = 0; t < 20 && !any_differ; ++t) {
      const Example ec = *c.next();
      const Example ed = *d.next();
      any_differ = ec.label != ed.label || ec.features != ed.features;
    }
    CHECK(any_differ);
  }
}

TEST_CASE("every drawn example lies in the unit ball") {
  SynthConfig cfg;
  cfg.k = 6;
  cfg.d = 12;
  cfg.seed = 7;
  SyntheticStream stream(cfg);
  for (int t = 0; t < 500; ++t) {
    const Example ex = *stream.next();
    CHECK(norm_of(ex.features) <= 1.0 + 1e-12);
    CHECK(ex.label >= 1);
    CHECK(ex.label <= cfg.k);
  }
}

TEST_CASE("clean streams certify against their own planted matrix") {
  SynthConfig cfg;
  cfg.k = 6;
  cfg.d = 8;
  cfg.margin = 1.0;
  cfg.seed = 202;

  SyntheticStream stream(cfg);
  const CertificateResult cert =
      separability_certificate(stream.planted(), stream, 2, 300);
  CHECK(cert.separable());
  CHECK(cert.hinge_sum == 0.0);
  CHECK(cert.min_margin >= 2.0 - 1e-9);

  SUBCASE("label noise breaks the certificate") {
    SynthConfig noisy = cfg;
    noisy.noise_rate = 0.5;
    SyntheticStream corrupted(noisy);
    const CertificateResult bad =
        separability_certificate(stream.planted(), corrupted, 2, 300);
    CHECK_FALSE(bad.separable());
    CHECK(bad.min_margin < 0.0);
  }
}

TEST_CASE("planted separators beat the classic perceptron ceiling") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    SynthConfig cfg;
    cfg.k = helpers::random_int(2, 10, rng);
    cfg.d = helpers::random_int(cfg.k, 64, rng);
    cfg.seed = rng();

    SyntheticStream stream(cfg, rng());
    const double complexity_cap = 2.0 * stream.planted().frobenius_sq();

    LearnerConfig lc;
    lc.algorithm = Algorithm::kPerceptron;
    lc.k = cfg.k;
    lc.d = cfg.d;
    lc.m = 1;
    PerceptronLearner learner(lc);
    long long mistakes = 0;
    for (int t = 0; t < 400; ++t) {
      mistakes += learner.process(*stream.next()).top1_mistake ? 1 : 0;
    }
    CHECK(static_cast<double>(mistakes) <= complexity_cap);
  }
}

TEST_CASE("label marginals are uniform") {
  SynthConfig cfg;
  cfg.k = 5;
  cfg.d = 16;
  cfg.seed = 424242;
  SyntheticStream stream(cfg);
  std::vector<long long> counts(static_cast<std::size_t>(cfg.k), 0);
  const long long draws = 100000;
  for (long long t = 0; t < draws; ++t) {
    ++counts[static_cast<std::size_t>(stream.next()->label - 1)];
  }
  const double expect = static_cast<double>(draws) / cfg.k;
  const double sigma = std::sqrt(static_cast<double>(draws) * 0.2 * 0.8);
  for (long long c : counts) {
    CHECK(std::abs(static_cast<double>(c) - expect) <= 3.0 * sigma);
  }
}

TEST_CASE("memory streams") {
  std::vector<Example> examples;
  for (int i = 0; i < 3; ++i) {
    examples.push_back(Example{{static_cast<double>(i)}, i + 1});
  }

  SUBCASE("one pass") {
    MemoryStream stream(examples);
    REQUIRE(stream.size().has_value());
    CHECK(*stream.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(stream.next()->label == i + 1);
    CHECK_FALSE(stream.next().has_value());
    CHECK_FALSE(stream.next().has_value());
  }

  SUBCASE("cycling wraps around") {
    MemoryStream stream(examples, true);
    CHECK_FALSE(stream.size().has_value());
    const int expect[] = {1, 2, 3, 1, 2, 3, 1};
    for (int label : expect) CHECK(stream.next()->label == label);
  }

  SUBCASE("an empty list") {
    MemoryStream stream(std::vector<Example>{});
    CHECK_FALSE(stream.next().has_value());
    CHECK(*stream.size() == 0);
    CHECK_THROWS_AS(MemoryStream(std::vector<Example>{}, true),
                    std::invalid_argument);
  }
}

TEST_CASE("feature files") {
  const auto dir = helpers::temp_dir("data");

  SUBCASE("hand-written file round-trips") {
    const std::string path = write_text(
        dir / "tiny.csv", "3,2\n2,0.5,-0.25\n1,3,4\n3,0,1\n");
    const FeatureFile file = load_features(path);
    CHECK(file.k == 3);
    CHECK(file.d == 2);
    REQUIRE(file.examples.size() == 3);
    CHECK(file.examples[0].label == 2);
    CHECK(file.examples[0].features == std::vector<double>{0.5, -0.25});
    CHECK(file.examples[1].label == 1);
    CHECK(file.examples[1].features == std::vector<double>{0.6, 0.8});
    CHECK(file.examples[2].features == std::vector<double>{0.0, 1.0});
    for (const Example& ex : file.examples) {
      CHECK(norm_of(ex.features) <= 1.0 + 1e-12);
    }

    const std::string copy = (dir / "copy.csv").string();
    write_features(copy, file.k, file.d, file.examples);
    const FeatureFile again = load_features(copy);
    REQUIRE(again.examples.size() == file.examples.size());
    for (std::size_t i = 0; i < file.examples.size(); ++i) {
      CHECK(again.examples[i].label == file.examples[i].label);
      CHECK(again.examples[i].features == file.examples[i].features);
    }
  }

  SUBCASE("generated data survives a disk round-trip") {
    SynthConfig cfg;
    cfg.k = 4;
    cfg.d = 6;
    cfg.seed = 88;
    const SeparableSample sample = generate_separable(cfg, 25);
    const std::string path = (dir / "gen.csv").string();
    write_features(path, cfg.k, cfg.d, sample.examples);
    const FeatureFile file = load_features(path);
    CHECK(file.k == 4);
    CHECK(file.d == 6);
    REQUIRE(file.examples.size() == 25);
    for (std::size_t i = 0; i < 25; ++i) {
      CHECK(file.examples[i].label == sample.examples[i].label);
      REQUIRE(file.examples[i].features.size() == 6);
      for (std::size_t j = 0; j < 6; ++j) {
        CHECK(file.examples[i].features[j] ==
              doctest::Approx(sample.examples[i].features[j]).epsilon(1e-12));
      }
    }
  }

  SUBCASE("malformed files carry the offending line number") {
    using Catcher = std::runtime_error;
    const auto expect_error = [&](const std::string& name,
                                  const std::string& text,
                                  const std::string& needle) {
      const std::string path = write_text(dir / name, text);
      try {
        load_features(path);
        FAIL_CHECK("expected a parse failure for " << name);
      } catch (const Catcher& e) {
        const std::string what = e.what();
        CHECK(what.find(needle) != std::string::npos);
      }
    };

    expect_error("short_row.csv", "3,2\n1,1,0\n2,0.5\n", ":3:");
    expect_error("long_row.csv", "3,2\n1,1,0,9\n", ":2:");
    expect_error("bad_label.csv", "3,2\n4,0,0\n", "label 4 outside [1, 3]");
    expect_error("zero_label.csv", "3,2\n0,0,0\n", "label 0 outside");
    expect_error("frac_label.csv", "3,2\n1.5,0,0\n", "not an integer");
    expect_error("bad_value.csv", "3,2\n1,abc,0\n", "not a finite number");
    expect_error("inf_value.csv", "3,2\n1,inf,0\n", "not a finite number");
    expect_error("empty.csv", "", "missing 'k,d' header");
    expect_error("bad_header.csv", "3\n1,0\n", "header must be 'k,d'");
    expect_error("bad_shape.csv", "1,5\n", "invalid shape");
    CHECK_THROWS_AS(load_features((dir / "missing.csv").string()),
                    std::runtime_error);
  }

  SUBCASE("writer rejects inconsistent rows") {
    std::vector<Example> rows{Example{{0.1, 0.2}, 1}};
    CHECK_THROWS_AS(write_features((dir / "w1.csv").string(), 1, 2, rows),
                    std::invalid_argument);
    CHECK_THROWS_AS(write_features((dir / "w2.csv").string(), 3, 3, rows),
                    std::invalid_argument);
    rows[0].label = 9;
    CHECK_THROWS_AS(write_features((dir / "w3.csv").string(), 3, 2, rows),
                    std::invalid_argument);
  }

  std::filesystem::remove_all(dir);
}
