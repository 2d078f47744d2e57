#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcdbf/data.hpp"
#include "mcdbf/learners.hpp"

namespace mcdbf {

// Where the examples come from. Either a synthetic generator (regenerated
// per run, so every seed sees a fresh i.i.d. stream) or a CSV file on disk.
struct DataSourceSpec {
  enum class Kind { kSynthetic, kFile };

  Kind kind = Kind::kSynthetic;
  SynthConfig synth;        // kind == kSynthetic
  std::string path;         // kind == kFile

  bool operator==(const DataSourceSpec&) const = default;
};

// Handle on an opened source: file contents are loaded once and shared,
// synthetic sources keep their planted matrix for bound reporting.
class DataSource {
 public:
  explicit DataSource(const DataSourceSpec& spec);

  // Fresh stream for one run. `run_seed` perturbs only synthetic sources;
  // file sources always replay the file in order (cycling when it is shorter
  // than the horizon).
  std::unique_ptr<ExampleStream> open(std::uint64_t run_seed) const;

  const DataSourceSpec& spec() const noexcept { return spec_; }
  int k() const noexcept { return k_; }
  int d() const noexcept { return d_; }

  // Planted separator, synthetic sources only.
  const WeightMatrix* planted() const noexcept;

 private:
  DataSourceSpec spec_;
  int k_ = 0;
  int d_ = 0;
  std::shared_ptr<const std::vector<Example>> file_examples_;
  std::shared_ptr<const WeightMatrix> planted_;
};

struct ExperimentSpec {
  Algorithm algorithm = Algorithm::kMcDbf;
  DataSourceSpec data;
  long long rounds = 100000;
  int m = 1;
  std::optional<double> gamma;  // nullopt: pick the horizon-optimal rate
  int seeds = 1;
  long long log_every = 1000;

  void validate() const;
};

// Stable derivation of one run's seed from the experiment seed index. The
// algorithm name is folded in so different algorithms explore independently,
// except that the m = 1 bandit aliases share a name (and hence a stream).
std::uint64_t derive_run_seed(std::uint64_t base_seed, int index, Algorithm algo);

struct MeanCurveRow {
  long long t = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  double resolved_gamma = 0.0;          // 0 for full-information learners
  std::vector<RunMetrics> runs;
  std::vector<MeanCurveRow> mean_curve;
  double mean_final_error = 0.0;
  double mean_set_mistakes = 0.0;
  std::optional<double> bound;          // mistake ceiling when computable
};

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                std::uint64_t base_seed, int jobs = 1);

struct SweepRow {
  double gamma = 0.0;
  double final_mean_error = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double best_gamma = 0.0;  // first gamma attaining the minimum error
  std::vector<ExperimentResult> results;  // one per grid point, grid order
};

SweepResult gamma_sweep(const ExperimentSpec& base,
                        const std::vector<double>& gammas,
                        std::uint64_t base_seed, int jobs = 1);

// Side-by-side runs over the same source and horizon.
struct CompareResult {
  std::vector<ExperimentResult> results;
};

CompareResult compare(const std::vector<ExperimentSpec>& specs,
                      std::uint64_t base_seed, int jobs = 1);

// Everything emit_report needs to lay the output directory down.
struct Report {
  std::string command;                    // "run", "sweep-gamma", "compare"
  std::vector<ExperimentResult> results;
  std::optional<SweepResult> sweep;
  std::uint64_t base_seed = 0;
  int jobs = 1;
};

// Writes curves.csv, summary.csv, sweep.csv (sweeps only) and manifest.json
// into `out_dir`, creating it if needed.
void emit_report(const Report& report, const std::string& out_dir);

// Re-executes the manifest at `path` and writes a fresh report into
// `out_dir`. The report is byte-identical to the original emit_report output
// for the same manifest.
Report execute_manifest(const std::string& path, const std::string& out_dir);

// (De)serialization used by emit_report / execute_manifest.
std::string manifest_to_json(const Report& report);
Report manifest_from_json(const std::string& text);

}  // namespace mcdbf
