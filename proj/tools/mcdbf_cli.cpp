#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "mcdbf/data.hpp"
#include "mcdbf/harness.hpp"
#include "mcdbf/learners.hpp"

namespace {

using namespace mcdbf;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
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

double parse_number(const std::string& text, const std::string& flag) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (text.empty() || pos != text.size()) {
    throw CLI::ValidationError(flag, "not a number: '" + text + "'");
  }
  return v;
}

int parse_integer(const std::string& text, const std::string& flag) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (text.empty() || pos != text.size()) {
    throw CLI::ValidationError(flag, "not an integer: '" + text + "'");
  }
  return v;
}

std::optional<double> parse_gamma(const std::string& text,
                                  const std::string& flag = "--gamma") {
  if (text == "auto") return std::nullopt;
  return parse_number(text, flag);
}

// Options shared by the experiment subcommands.
struct ExperimentOptions {
  std::string data_path;
  SynthConfig synth;
  long long rounds = 100000;
  int m = 1;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  long long log_every = 1000;
  int jobs = 1;
  std::string out_dir;
  std::string config_path;

  CLI::Option* data_opt = nullptr;

  DataSourceSpec data_spec() const {
    DataSourceSpec spec;
    if (data_opt->count() > 0) {
      spec.kind = DataSourceSpec::Kind::kFile;
      spec.path = data_path;
    } else {
      spec.kind = DataSourceSpec::Kind::kSynthetic;
      spec.synth = synth;
    }
    return spec;
  }

  ExperimentSpec base_spec() const {
    ExperimentSpec spec;
    spec.data = data_spec();
    spec.rounds = rounds;
    spec.m = m;
    spec.seeds = seeds;
    spec.log_every = log_every;
    return spec;
  }
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& opts) {
  opts.data_opt =
      cmd->add_option("--data", opts.data_path,
                      "Feature CSV; omit to generate a synthetic stream");
  cmd->add_option("--k", opts.synth.k, "Synthetic: number of classes")
      ->capture_default_str();
  cmd->add_option("--d", opts.synth.d, "Synthetic: feature dimension")
      ->capture_default_str();
  cmd->add_option("--margin", opts.synth.margin, "Synthetic: separation margin")
      ->capture_default_str();
  cmd->add_option("--noise-rate", opts.synth.noise_rate,
                  "Synthetic: label flip probability")
      ->capture_default_str();
  cmd->add_option("--data-seed", opts.synth.seed,
                  "Synthetic: seed fixing the planted separator")
      ->capture_default_str();
  cmd->add_option("--T", opts.rounds, "Rounds per run")->capture_default_str();
  cmd->add_option("--m", opts.m, "Predicted set size")->capture_default_str();
  cmd->add_option("--seeds", opts.seeds, "Number of independent runs")
      ->capture_default_str();
  cmd->add_option("--seed", opts.base_seed, "Base seed for run derivation")
      ->capture_default_str();
  cmd->add_option("--log-every", opts.log_every, "Checkpoint interval")
      ->capture_default_str();
  cmd->add_option("--jobs", opts.jobs, "Parallel runs")->capture_default_str();
  cmd->add_option("--out", opts.out_dir, "Report directory")->required();
  cmd->add_option("--config", opts.config_path,
                  "Replay a manifest instead of reading flags");
}

// When --config is present every other experiment flag must stay unset.
void reject_flags_with_config(const CLI::App* cmd) {
  for (const CLI::Option* opt : cmd->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--config" || name == "--out" || name == "--help") continue;
    if (opt->count() > 0) {
      throw CLI::ValidationError(
          "--config", "replay takes the manifest as-is; drop " + name);
    }
  }
}

void check_manifest_command(const std::string& path,
                            const std::string& expected) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Report parsed = manifest_from_json(buffer.str());
  if (parsed.command != expected) {
    throw std::runtime_error(fmt::format(
        "{}: manifest was recorded by '{}', not '{}'", path, parsed.command,
        expected));
  }
}

void warn_if_extreme(const ExperimentResult& result, int k, int d) {
  LearnerConfig lc;
  lc.algorithm = result.spec.algorithm;
  lc.k = k;
  lc.d = d;
  lc.m = result.spec.m;
  lc.gamma = result.resolved_gamma > 0.0 ? result.resolved_gamma : 0.5;
  if (const auto warning = config_warning(lc)) {
    fmt::print(stderr, "note: {}\n", *warning);
  }
}

// The tuned rate is clamped into (1e-6, 1 - 1e-6); landing on either edge
// means the horizon or the separator complexity is far outside the regime
// the tuning formula was made for.
void note_if_clipped(const ExperimentResult& result) {
  const bool bandit = result.spec.algorithm == Algorithm::kMcDbf ||
                      result.spec.algorithm == Algorithm::kBanditron;
  if (!bandit || result.spec.gamma.has_value()) return;
  if (result.resolved_gamma <= 1e-6 || result.resolved_gamma >= 1.0 - 1e-6) {
    fmt::print(stderr,
               "note: tuned exploration rate was clipped to {}; set --gamma "
               "explicitly for this configuration\n",
               result.resolved_gamma);
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Online multiclass learning under diluted bandit feedback"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen-data",
                                 "Write a linearly separable feature CSV");
  SynthConfig gen_config;
  long long gen_count = 10000;
  std::string gen_out;
  gen->add_option("--k", gen_config.k, "Number of classes")
      ->capture_default_str();
  gen->add_option("--d", gen_config.d, "Feature dimension")
      ->capture_default_str();
  gen->add_option("--margin", gen_config.margin, "Separation margin")
      ->capture_default_str();
  gen->add_option("--noise-rate", gen_config.noise_rate,
                  "Label flip probability")
      ->capture_default_str();
  gen->add_option("--seed", gen_config.seed, "Generator seed")
      ->capture_default_str();
  gen->add_option("--count", gen_count, "Examples to write")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  auto* run = app.add_subcommand("run", "Run one algorithm over seeds");
  ExperimentOptions run_opts;
  std::string run_algo = "mc-dbf";
  std::string run_gamma = "auto";
  run->add_option("--algo", run_algo,
                  "mc-dbf | mc-slp | banditron | perceptron")
      ->capture_default_str();
  run->add_option("--gamma", run_gamma, "Exploration rate or 'auto'")
      ->capture_default_str();
  add_experiment_options(run, run_opts);

  auto* sweep = app.add_subcommand("sweep-gamma",
                                   "Grid-search the exploration rate");
  ExperimentOptions sweep_opts;
  std::string sweep_algo = "mc-dbf";
  std::string sweep_gammas;
  sweep->add_option("--algo", sweep_algo, "mc-dbf | banditron")
      ->capture_default_str();
  sweep->add_option("--gammas", sweep_gammas,
                    "Comma-separated exploration rates");
  add_experiment_options(sweep, sweep_opts);

  auto* cmp = app.add_subcommand("compare",
                                 "Run several configurations on one source");
  ExperimentOptions cmp_opts;
  std::string cmp_algos;
  std::string cmp_ms;
  std::string cmp_gammas;
  cmp->add_option("--algos", cmp_algos, "Comma-separated algorithm names");
  cmp->add_option("--ms", cmp_ms,
                  "Comma-separated set sizes; single value broadcasts");
  cmp->add_option("--gammas", cmp_gammas,
                  "Comma-separated rates or 'auto'; single value broadcasts");
  add_experiment_options(cmp, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (gen->parsed()) {
    const SeparableSample sample = generate_separable(gen_config, gen_count);
    write_features(gen_out, gen_config.k, gen_config.d, sample.examples);
    fmt::print("wrote {} examples to {}\n", sample.examples.size(), gen_out);
    return 0;
  }

  if (run->parsed()) {
    if (!run_opts.config_path.empty()) {
      reject_flags_with_config(run);
      check_manifest_command(run_opts.config_path, "run");
      execute_manifest(run_opts.config_path, run_opts.out_dir);
      fmt::print("replayed {} into {}\n", run_opts.config_path,
                 run_opts.out_dir);
      return 0;
    }
    ExperimentSpec spec = run_opts.base_spec();
    spec.algorithm = algorithm_from_name(run_algo);
    spec.gamma = parse_gamma(run_gamma);
    Report report;
    report.command = "run";
    report.base_seed = run_opts.base_seed;
    report.jobs = run_opts.jobs;
    report.results.push_back(
        run_experiment(spec, run_opts.base_seed, run_opts.jobs));
    const DataSource source(spec.data);
    warn_if_extreme(report.results.front(), source.k(), source.d());
    note_if_clipped(report.results.front());
    emit_report(report, run_opts.out_dir);
    fmt::print("{}: final error {} over {} seeds\n", run_algo,
               report.results.front().mean_final_error, spec.seeds);
    return 0;
  }

  if (sweep->parsed()) {
    if (!sweep_opts.config_path.empty()) {
      reject_flags_with_config(sweep);
      check_manifest_command(sweep_opts.config_path, "sweep-gamma");
      execute_manifest(sweep_opts.config_path, sweep_opts.out_dir);
      fmt::print("replayed {} into {}\n", sweep_opts.config_path,
                 sweep_opts.out_dir);
      return 0;
    }
    if (sweep_gammas.empty()) {
      throw CLI::ValidationError("--gammas",
                                 "required unless --config is given");
    }
    std::vector<double> gammas;
    for (const std::string& field : split_list(sweep_gammas)) {
      gammas.push_back(parse_number(field, "--gammas"));
    }
    ExperimentSpec base = sweep_opts.base_spec();
    base.algorithm = algorithm_from_name(sweep_algo);
    SweepResult sweep_result =
        gamma_sweep(base, gammas, sweep_opts.base_seed, sweep_opts.jobs);
    Report report;
    report.command = "sweep-gamma";
    report.base_seed = sweep_opts.base_seed;
    report.jobs = sweep_opts.jobs;
    report.results = std::move(sweep_result.results);
    sweep_result.results.clear();
    report.sweep = std::move(sweep_result);
    emit_report(report, sweep_opts.out_dir);
    fmt::print("best gamma {} (error {})\n", report.sweep->best_gamma,
               [&] {
                 for (const SweepRow& row : report.sweep->rows) {
                   if (row.gamma == report.sweep->best_gamma) {
                     return row.final_mean_error;
                   }
                 }
                 return 0.0;
               }());
    return 0;
  }

  if (cmp->parsed()) {
    if (!cmp_opts.config_path.empty()) {
      reject_flags_with_config(cmp);
      check_manifest_command(cmp_opts.config_path, "compare");
      execute_manifest(cmp_opts.config_path, cmp_opts.out_dir);
      fmt::print("replayed {} into {}\n", cmp_opts.config_path,
                 cmp_opts.out_dir);
      return 0;
    }
    if (cmp_algos.empty()) {
      throw CLI::ValidationError("--algos",
                                 "required unless --config is given");
    }
    const std::vector<std::string> algos = split_list(cmp_algos);
    std::vector<std::string> ms =
        cmp_ms.empty() ? std::vector<std::string>{} : split_list(cmp_ms);
    std::vector<std::string> gammas =
        cmp_gammas.empty() ? std::vector<std::string>{} : split_list(cmp_gammas);
    std::size_t n = std::max({algos.size(), ms.size(), gammas.size()});
    const auto broadcast = [n](std::vector<std::string>& list,
                               const std::string& fallback) {
      if (list.empty()) list.assign(n, fallback);
      if (list.size() == 1) list.assign(n, list.front());
      if (list.size() != n) {
        throw CLI::ValidationError(
            "compare", "--algos/--ms/--gammas lengths must match or be 1");
      }
    };
    std::vector<std::string> algo_list = algos;
    broadcast(algo_list, algos.front());
    broadcast(ms, fmt::format("{}", cmp_opts.m));
    broadcast(gammas, "auto");
    std::vector<ExperimentSpec> specs;
    for (std::size_t i = 0; i < n; ++i) {
      ExperimentSpec spec = cmp_opts.base_spec();
      spec.algorithm = algorithm_from_name(algo_list[i]);
      spec.m = parse_integer(ms[i], "--ms");
      spec.gamma = parse_gamma(gammas[i], "--gammas");
      specs.push_back(spec);
    }
    CompareResult cmp_result =
        compare(specs, cmp_opts.base_seed, cmp_opts.jobs);
    Report report;
    report.command = "compare";
    report.base_seed = cmp_opts.base_seed;
    report.jobs = cmp_opts.jobs;
    report.results = std::move(cmp_result.results);
    emit_report(report, cmp_opts.out_dir);
    for (const ExperimentResult& res : report.results) {
      fmt::print("{} (m={}): final error {}\n",
                 algorithm_name(res.spec.algorithm), res.spec.m,
                 res.mean_final_error);
    }
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
