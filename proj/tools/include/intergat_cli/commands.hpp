#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <intergat/community.hpp>
#include <intergat/config.hpp>
#include <intergat/graph.hpp>
#include <intergat/trainer.hpp>

namespace intergat::cli {

namespace fs = std::filesystem;

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kData = 3,
  kNumeric = 4,
  kCompatibility = 5,
};

int exit_code_for(const std::exception& e);

struct LoadedData {
  Graph graph;
  SignalTensor signal;  // raw units
};

/// Synthetic or CSV data as described by `config.data`.
LoadedData load_data(const RunConfig& config);
WindowedDataset make_windows(const RunConfig& config, const SignalTensor& raw);

struct RunSummary {
  std::uint64_t seed = 0;
  fs::path dir;
  EvaluationReport test;
  TrainResult training;
  std::size_t parameters = 0;
};

/// Trains one model per seed (seed, seed + 1, ...). With more than one seed each run
/// writes to `out/seed_<s>` and `out/aggregate_metrics.csv` summarizes them.
std::vector<RunSummary> cmd_train(const RunConfig& config);

struct EvaluateOptions {
  fs::path checkpoint;
  std::optional<RunConfig> data_override;  // data section taken from here when set
  std::size_t steps = 0;                   // first N horizon steps, 0 = all
  double step_minutes = 0.0;               // labels per-step rows when > 0
  std::optional<fs::path> out;
  std::size_t threads = 1;
};

/// Scores a checkpoint on the test split of its (or the overriding) dataset and returns
/// the metrics document that is also written to `out/metrics.json`.
std::string cmd_evaluate(const EvaluateOptions& options);

/// Trains every variant under the same config and seeds, writes `out/ablation.csv`.
std::vector<std::pair<Variant, std::vector<RunSummary>>> cmd_ablate(const RunConfig& config,
                                                                     const std::vector<Variant>& variants);

struct AnalyzeOptions {
  fs::path checkpoint;
  fs::path out;
  enum class Matrix { raw, processed };
  Matrix spectra_matrix = Matrix::raw;     // symmetrized raw I by default
  Matrix contrast_matrix = Matrix::processed;
  bool absolute = false;
  Aggregation aggregation = Aggregation::mean;
  std::size_t k_min = 2;
  std::size_t k_max = 32;
  double top_percent = 100.0;  // heatmap keeps entries at or above this upper percentile
  std::size_t top_vectors = 5;
  std::uint64_t seed = 0;
};

void cmd_analyze(const AnalyzeOptions& options);

struct SynthCommand {
  std::size_t nodes = 20;
  std::size_t communities = 4;
  std::size_t steps = 400;
  std::uint64_t seed = 7;
  fs::path out;
};

void cmd_synth(const SynthCommand& options);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace intergat::cli
