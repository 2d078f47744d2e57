#include "mcdbf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include "mcdbf/bounds.hpp"

namespace mcdbf {

namespace {

using nlohmann::json;

bool is_bandit(Algorithm a) {
  return a == Algorithm::kMcDbf || a == Algorithm::kBanditron;
}

std::uint64_t mix64(std::uint64_t s) {
  s += 0x9e3779b97f4a7c15ULL;
  s = (s ^ (s >> 30)) * 0xbf58476d1ce4e5b9ULL;
  s = (s ^ (s >> 27)) * 0x94d049bb133111ebULL;
  return s ^ (s >> 31);
}

}  // namespace

DataSource::DataSource(const DataSourceSpec& spec) : spec_(spec) {
  if (spec_.kind == DataSourceSpec::Kind::kSynthetic) {
    spec_.synth.validate();
    k_ = spec_.synth.k;
    d_ = spec_.synth.d;
    SyntheticStream probe(spec_.synth);
    planted_ = std::make_shared<const WeightMatrix>(probe.planted());
  } else {
    FeatureFile file = load_features(spec_.path);
    k_ = file.k;
    d_ = file.d;
    if (file.examples.empty()) {
      throw std::runtime_error(spec_.path + ": no examples after the header");
    }
    file_examples_ = std::make_shared<const std::vector<Example>>(
        std::move(file.examples));
  }
}

std::unique_ptr<ExampleStream> DataSource::open(std::uint64_t run_seed) const {
  if (spec_.kind == DataSourceSpec::Kind::kSynthetic) {
    return std::make_unique<SyntheticStream>(spec_.synth, run_seed);
  }
  return std::make_unique<MemoryStream>(*file_examples_, /*cycle=*/true);
}

const WeightMatrix* DataSource::planted() const noexcept {
  return planted_ ? planted_.get() : nullptr;
}

void ExperimentSpec::validate() const {
  if (rounds < 0) throw std::invalid_argument("negative horizon");
  if (m < 1) throw std::invalid_argument("set size must be positive");
  if (seeds < 1) throw std::invalid_argument("need at least one seed");
  if (log_every < 1) throw std::invalid_argument("log interval must be positive");
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) {
    throw std::invalid_argument("exploration rate must lie in (0, 1)");
  }
  if (algorithm == Algorithm::kBanditron && m != 1) {
    throw std::invalid_argument("single-label bandit requires m = 1");
  }
}

std::uint64_t derive_run_seed(std::uint64_t base_seed, int index,
                              Algorithm algo) {
  // The m = 1 bandit is the same sampler as the set learner, so both names
  // hash to the same stream.
  const std::string name =
      algo == Algorithm::kBanditron ? algorithm_name(Algorithm::kMcDbf)
                                    : algorithm_name(algo);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  const auto fold = [&h](std::uint64_t value, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (value >> (8 * i)) & 0xffULL;
      h *= 0x100000001b3ULL;
    }
  };
  fold(base_seed, 8);
  fold(static_cast<std::uint64_t>(index), 8);
  for (char c : name) fold(static_cast<unsigned char>(c), 1);
  return mix64(h);
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                std::uint64_t base_seed, int jobs) {
  spec.validate();
  if (jobs < 1) throw std::invalid_argument("need at least one job");
  DataSource source(spec.data);
  if (spec.m >= source.k()) throw std::invalid_argument("need m < k");

  ExperimentResult result;
  result.spec = spec;

  const bool bandit = is_bandit(spec.algorithm);
  if (bandit) {
    if (spec.gamma) {
      result.resolved_gamma = *spec.gamma;
    } else {
      const WeightMatrix* planted = source.planted();
      if (!planted) {
        throw std::invalid_argument(
            "automatic exploration rate needs a synthetic source with a "
            "planted separator");
      }
      result.resolved_gamma =
          optimal_gamma(source.k(), spec.m, 2.0 * planted->frobenius_sq(),
                        std::max<long long>(1, spec.rounds));
    }
  }

  result.runs.resize(static_cast<std::size_t>(spec.seeds));
  std::vector<double> hinge_sums(static_cast<std::size_t>(spec.seeds), 0.0);
  const WeightMatrix* planted = source.planted();
  const bool want_bound = bandit && planted != nullptr && spec.rounds > 0;

  const auto run_one = [&](int index) {
    const std::uint64_t run_seed =
        derive_run_seed(base_seed, index, spec.algorithm);
    LearnerConfig lc;
    lc.algorithm = spec.algorithm;
    lc.k = source.k();
    lc.d = source.d();
    lc.m = spec.m;
    lc.gamma = result.resolved_gamma;
    lc.seed = run_seed;
    auto learner = make_learner(lc);
    auto stream = source.open(run_seed);
    RunConfig rc;
    rc.rounds = spec.rounds;
    rc.log_every = spec.log_every;
    result.runs[static_cast<std::size_t>(index)] =
        run_online(*learner, *stream, rc);
    if (want_bound) {
      auto replay = source.open(run_seed);
      hinge_sums[static_cast<std::size_t>(index)] =
          separability_certificate(*planted, *replay, spec.m, spec.rounds)
              .hinge_sum;
    }
  };

  const int workers = std::min(jobs, spec.seeds);
  if (workers <= 1) {
    for (int i = 0; i < spec.seeds; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        try {
          for (int i = next.fetch_add(1); i < spec.seeds;
               i = next.fetch_add(1)) {
            run_one(i);
          }
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Checkpoints align across seeds because synthetic streams never run dry
  // and file streams cycle.
  const std::size_t points = result.runs.front().curve.size();
  result.mean_curve.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    const long long t = result.runs.front().curve[p].t;
    double mean = 0.0;
    for (const RunMetrics& run : result.runs) {
      if (run.curve.size() != points || run.curve[p].t != t) {
        throw std::runtime_error("checkpoint misalignment across seeds");
      }
      mean += static_cast<double>(run.curve[p].set_mistakes) /
              static_cast<double>(t);
    }
    mean /= static_cast<double>(spec.seeds);
    double var = 0.0;
    for (const RunMetrics& run : result.runs) {
      const double e = static_cast<double>(run.curve[p].set_mistakes) /
                       static_cast<double>(t);
      var += (e - mean) * (e - mean);
    }
    const double stddev =
        spec.seeds > 1 ? std::sqrt(var / static_cast<double>(spec.seeds - 1))
                       : 0.0;
    result.mean_curve.push_back({t, mean, stddev});
  }

  for (const RunMetrics& run : result.runs) {
    result.mean_final_error += run.final_error;
    result.mean_set_mistakes += static_cast<double>(run.set_mistakes);
  }
  result.mean_final_error /= static_cast<double>(spec.seeds);
  result.mean_set_mistakes /= static_cast<double>(spec.seeds);

  if (want_bound) {
    double mean_hinge = 0.0;
    for (double h : hinge_sums) mean_hinge += h;
    mean_hinge /= static_cast<double>(spec.seeds);
    MistakeBoundInputs in;
    in.k = source.k();
    in.m = spec.m;
    in.gamma = result.resolved_gamma;
    in.rounds = spec.rounds;
    in.complexity = 2.0 * planted->frobenius_sq();
    in.hinge_sum = mean_hinge;
    result.bound = expected_mistake_bound(in);
  }
  return result;
}

SweepResult gamma_sweep(const ExperimentSpec& base,
                        const std::vector<double>& gammas,
                        std::uint64_t base_seed, int jobs) {
  if (gammas.empty()) throw std::invalid_argument("empty gamma grid");
  if (!is_bandit(base.algorithm)) {
    throw std::invalid_argument("gamma sweeps apply to bandit learners only");
  }
  SweepResult out;
  out.rows.reserve(gammas.size());
  for (double g : gammas) {
    ExperimentSpec spec = base;
    spec.gamma = g;
    ExperimentResult res = run_experiment(spec, base_seed, jobs);
    out.rows.push_back({g, res.mean_final_error});
    out.results.push_back(std::move(res));
  }
  out.best_gamma = out.rows.front().gamma;
  double best = out.rows.front().final_mean_error;
  for (const SweepRow& row : out.rows) {
    if (row.final_mean_error < best) {
      best = row.final_mean_error;
      out.best_gamma = row.gamma;
    }
  }
  return out;
}

CompareResult compare(const std::vector<ExperimentSpec>& specs,
                      std::uint64_t base_seed, int jobs) {
  if (specs.empty()) throw std::invalid_argument("nothing to compare");
  for (const ExperimentSpec& spec : specs) {
    if (!(spec.data == specs.front().data)) {
      throw std::invalid_argument("compared runs must share one data source");
    }
    if (spec.rounds != specs.front().rounds ||
        spec.log_every != specs.front().log_every) {
      throw std::invalid_argument(
          "compared runs must share horizon and log interval");
    }
  }
  CompareResult out;
  out.results.reserve(specs.size());
  for (const ExperimentSpec& spec : specs) {
    out.results.push_back(run_experiment(spec, base_seed, jobs));
  }
  return out;
}

namespace {

json data_to_json(const DataSourceSpec& data) {
  json j;
  if (data.kind == DataSourceSpec::Kind::kSynthetic) {
    j["type"] = "synthetic";
    j["k"] = data.synth.k;
    j["d"] = data.synth.d;
    j["margin"] = data.synth.margin;
    j["noise_rate"] = data.synth.noise_rate;
    j["seed"] = data.synth.seed;
  } else {
    j["type"] = "file";
    j["path"] = data.path;
  }
  return j;
}

DataSourceSpec data_from_json(const json& j) {
  DataSourceSpec data;
  const std::string type = j.at("type").get<std::string>();
  if (type == "synthetic") {
    data.kind = DataSourceSpec::Kind::kSynthetic;
    data.synth.k = j.at("k").get<int>();
    data.synth.d = j.at("d").get<int>();
    data.synth.margin = j.at("margin").get<double>();
    data.synth.noise_rate = j.at("noise_rate").get<double>();
    data.synth.seed = j.at("seed").get<std::uint64_t>();
  } else if (type == "file") {
    data.kind = DataSourceSpec::Kind::kFile;
    data.path = j.at("path").get<std::string>();
  } else {
    throw std::runtime_error("unknown data source type: " + type);
  }
  return data;
}

json spec_to_json(const ExperimentSpec& spec) {
  json j;
  j["algorithm"] = algorithm_name(spec.algorithm);
  j["data"] = data_to_json(spec.data);
  j["rounds"] = spec.rounds;
  j["m"] = spec.m;
  if (spec.gamma) {
    j["gamma"] = *spec.gamma;
  } else {
    j["gamma"] = "auto";
  }
  j["seeds"] = spec.seeds;
  j["log_every"] = spec.log_every;
  return j;
}

ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec spec;
  spec.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  spec.data = data_from_json(j.at("data"));
  spec.rounds = j.at("rounds").get<long long>();
  spec.m = j.at("m").get<int>();
  const json& g = j.at("gamma");
  if (g.is_string()) {
    if (g.get<std::string>() != "auto") {
      throw std::runtime_error("gamma must be a number or \"auto\"");
    }
    spec.gamma = std::nullopt;
  } else {
    spec.gamma = g.get<double>();
  }
  spec.seeds = j.at("seeds").get<int>();
  spec.log_every = j.at("log_every").get<long long>();
  return spec;
}

}  // namespace

std::string manifest_to_json(const Report& report) {
  json j;
  j["version"] = "0.1.0";
  j["command"] = report.command;
  j["base_seed"] = report.base_seed;
  j["jobs"] = report.jobs;
  json experiments = json::array();
  if (report.sweep) {
    // A sweep replays from its base spec plus the grid, not from the
    // per-gamma result specs.
    ExperimentSpec base = report.results.front().spec;
    base.gamma = std::nullopt;
    experiments.push_back(spec_to_json(base));
    json gammas = json::array();
    for (const SweepRow& row : report.sweep->rows) gammas.push_back(row.gamma);
    j["sweep_gammas"] = gammas;
  } else {
    for (const ExperimentResult& res : report.results) {
      experiments.push_back(spec_to_json(res.spec));
    }
  }
  j["experiments"] = experiments;
  return j.dump(2) + "\n";
}

Report manifest_from_json(const std::string& text) {
  const json j = json::parse(text);
  Report report;
  report.command = j.at("command").get<std::string>();
  report.base_seed = j.at("base_seed").get<std::uint64_t>();
  report.jobs = j.at("jobs").get<int>();
  for (const json& spec : j.at("experiments")) {
    ExperimentResult res;
    res.spec = spec_from_json(spec);
    report.results.push_back(std::move(res));
  }
  if (j.contains("sweep_gammas")) {
    SweepResult sweep;
    for (const json& g : j.at("sweep_gammas")) {
      sweep.rows.push_back({g.get<double>(), 0.0});
    }
    report.sweep = std::move(sweep);
  }
  return report;
}

namespace {

std::string gamma_field(const ExperimentResult& res) {
  if (!is_bandit(res.spec.algorithm)) return "";
  return fmt::format("{}", res.resolved_gamma);
}

void write_curves(const Report& report, const std::string& path) {
  auto out = fmt::output_file(path);
  bool first = true;
  for (const ExperimentResult& res : report.results) {
    if (!first) out.print("\n");
    first = false;
    out.print("# algo={} m={}{}\n", algorithm_name(res.spec.algorithm),
              res.spec.m,
              is_bandit(res.spec.algorithm)
                  ? fmt::format(" gamma={}", res.resolved_gamma)
                  : std::string());
    out.print("t,mean_error,std_error\n");
    for (const MeanCurveRow& row : res.mean_curve) {
      out.print("{},{},{}\n", row.t, row.mean_error, row.std_error);
    }
  }
}

void write_summary(const Report& report, const std::string& path) {
  auto out = fmt::output_file(path);
  out.print("algo,gamma,m,T,final_error,set_mistakes,bound\n");
  for (const ExperimentResult& res : report.results) {
    out.print("{},{},{},{},{},{},{}\n", algorithm_name(res.spec.algorithm),
              gamma_field(res), res.spec.m, res.spec.rounds,
              res.mean_final_error, res.mean_set_mistakes,
              res.bound ? fmt::format("{}", *res.bound) : std::string());
  }
}

void write_sweep(const SweepResult& sweep, const std::string& path) {
  auto out = fmt::output_file(path);
  out.print("# best_gamma={}\n", sweep.best_gamma);
  out.print("gamma,final_mean_error\n");
  for (const SweepRow& row : sweep.rows) {
    out.print("{},{}\n", row.gamma, row.final_mean_error);
  }
}

void write_loglog(const Report& report, const std::string& path) {
  auto out = fmt::output_file(path);
  bool first = true;
  for (const ExperimentResult& res : report.results) {
    if (!first) out.print("\n");
    first = false;
    out.print("# algo={} m={}\n", algorithm_name(res.spec.algorithm),
              res.spec.m);
    out.print("t,log10_t,log10_mean_set_mistakes\n");
    for (const MeanCurveRow& row : res.mean_curve) {
      const double mean_count =
          row.mean_error * static_cast<double>(row.t);
      out.print("{},{},{}\n", row.t,
                std::log10(static_cast<double>(row.t)),
                mean_count > 0.0 ? fmt::format("{}", std::log10(mean_count))
                                 : std::string());
    }
  }
}

}  // namespace

void emit_report(const Report& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error(out_dir + ": cannot create directory: " +
                             ec.message());
  }
  const fs::path dir(out_dir);
  write_curves(report, (dir / "curves.csv").string());
  write_summary(report, (dir / "summary.csv").string());
  if (report.sweep) write_sweep(*report.sweep, (dir / "sweep.csv").string());
  if (report.command == "compare") {
    write_loglog(report, (dir / "loglog.csv").string());
  }
  std::ofstream manifest(dir / "manifest.json");
  if (!manifest) {
    throw std::runtime_error((dir / "manifest.json").string() +
                             ": cannot open for writing");
  }
  manifest << manifest_to_json(report);
}

Report execute_manifest(const std::string& path, const std::string& out_dir) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  Report parsed = manifest_from_json(buffer.str());

  Report fresh;
  fresh.command = parsed.command;
  fresh.base_seed = parsed.base_seed;
  fresh.jobs = parsed.jobs;
  if (parsed.command == "run") {
    if (parsed.results.size() != 1) {
      throw std::runtime_error("run manifest must hold exactly one experiment");
    }
    fresh.results.push_back(
        run_experiment(parsed.results.front().spec, parsed.base_seed,
                       parsed.jobs));
  } else if (parsed.command == "sweep-gamma") {
    if (parsed.results.size() != 1 || !parsed.sweep) {
      throw std::runtime_error(
          "sweep manifest must hold one experiment and a gamma grid");
    }
    std::vector<double> gammas;
    for (const SweepRow& row : parsed.sweep->rows) gammas.push_back(row.gamma);
    ExperimentSpec base = parsed.results.front().spec;
    base.gamma = std::nullopt;
    SweepResult sweep = gamma_sweep(base, gammas, parsed.base_seed,
                                    parsed.jobs);
    fresh.results = std::move(sweep.results);
    sweep.results.clear();
    fresh.sweep = std::move(sweep);
  } else if (parsed.command == "compare") {
    std::vector<ExperimentSpec> specs;
    for (const ExperimentResult& res : parsed.results) specs.push_back(res.spec);
    CompareResult cmp = compare(specs, parsed.base_seed, parsed.jobs);
    fresh.results = std::move(cmp.results);
  } else {
    throw std::runtime_error("unknown manifest command: " + parsed.command);
  }
  emit_report(fresh, out_dir);
  return fresh;
}

}  // namespace mcdbf
