#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "intergat/adam.hpp"
#include "intergat/dataset.hpp"
#include "intergat/metrics.hpp"
#include "intergat/model.hpp"

namespace intergat {

struct OptimConfig {
  double learning_rate = 1e-3;
  double weight_decay = 1e-5;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  double lambda_sparse = 1e-4;
  std::size_t patience = 10;
  TeacherForcingPolicy forcing;
  std::size_t threads = 1;
};

/// Per-epoch losses. Task loss is MSE in de-normalized units²; total = task + sparse.
struct EpochLoss {
  std::size_t epoch = 0;  // 1-based
  double task = 0.0;
  double sparse = 0.0;
  double total = 0.0;
  double val_mae = 0.0;
  double forcing_probability = 0.0;
  double seconds = 0.0;
};

/// Sparsity and Frobenius norm of one head's symmetrized raw interaction matrix.
struct InteractionStat {
  std::size_t epoch = 0;
  std::size_t head = 0;
  double sparsity = 0.0;
  double frobenius = 0.0;
};

struct RuntimeReport {
  std::size_t epochs = 0;
  double mean_epoch_seconds = 0.0;
  double total_minutes = 0.0;
  double mean_forward_seconds = 0.0;   // per epoch
  double mean_backward_seconds = 0.0;  // per epoch
};

struct TrainResult {
  std::vector<EpochLoss> history;
  std::vector<InteractionStat> interaction_series;
  RuntimeReport runtime;
  std::size_t best_epoch = 0;
  double best_val_mae = 0.0;
  bool stopped_early = false;
};

struct TrainHooks {
  /// Called after every optimizer step with the 1-based epoch and global step index.
  std::function<void(const Model&, std::size_t epoch, std::size_t step)> on_step;
  std::function<void(const Model&, const EpochLoss&)> on_epoch;
};

/// Builds the interaction source for `spec.spatial.variant` from the graph and the
/// training portion of the dataset, then initializes a model from `seed`.
Model make_model(const ModelSpec& spec, const Graph& graph, const WindowedDataset& data, std::size_t clusters,
                 std::uint64_t seed);

/// Mini-batch Adam on the training windows with early stopping on validation MAE.
/// The best-validation parameters are restored before returning. Throws NumericError
/// naming the first non-finite tensor if the loss diverges.
TrainResult train(Model& model, const WindowedDataset& data, const OptimConfig& config, std::uint64_t seed,
                  const TrainHooks& hooks = {});

struct EvaluationReport {
  MetricReport joint;                 // all horizon steps together
  std::vector<MetricReport> per_step; // one per horizon step
  std::size_t windows = 0;
};

/// Eval-mode predictions on `windows`, de-normalized before scoring. `steps` limits
/// scoring to the first horizon steps (0 = all). Throws DataError for an empty window set.
EvaluationReport evaluate(const Model& model, const WindowedDataset& data, std::span<const Window> windows,
                          std::size_t threads = 1, std::size_t steps = 0);
EvaluationReport evaluate(const Model& model, const WindowedDataset& data, std::size_t threads = 1);

std::vector<Sample> make_samples(const WindowedDataset& data, std::span<const Window> windows);

}  // namespace intergat
