#include "intergat/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "intergat/error.hpp"
#include "intergat/loss.hpp"
#include "intergat/parallel.hpp"
#include "intergat/spectra.hpp"

namespace intergat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string first_nonfinite(const FrameBatch& batch, const char* what) {
  for (std::size_t b = 0; b < batch.size(); ++b)
    for (std::size_t t = 0; t < batch[b].size(); ++t)
      if (!all_finite(batch[b][t]))
        return std::string(what) + "[sample " + std::to_string(b) + ", step " + std::to_string(t) + "]";
  return {};
}

std::string first_nonfinite(const std::vector<std::pair<std::string, const Mat*>>& params) {
  for (const auto& [name, value] : params)
    if (!all_finite(*value)) return name;
  return {};
}

std::string first_nonfinite(const GradSet& grads) {
  for (const auto& g : grads.entries())
    if (!all_finite(g.value)) return "gradient of " + g.param;
  return {};
}

[[noreturn]] void diverged(const std::string& tensor, std::size_t epoch, std::size_t batch) {
  throw NumericError("non-finite value in " + tensor + " at epoch " + std::to_string(epoch) + ", batch " +
                     std::to_string(batch));
}

std::vector<Mat> snapshot(const Model& model) {
  std::vector<Mat> out;
  for (const auto& [name, value] : model.parameters()) out.push_back(*value);
  return out;
}

void restore(Model& model, const std::vector<Mat>& values) {
  auto params = model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) *params[i].value = values[i];
}

std::size_t train_frame_count(const WindowedDataset& data) {
  std::size_t last = 0;
  for (const auto& w : data.train) last = std::max(last, w.start + data.history + data.horizon);
  return last;
}

}  // namespace

std::vector<Sample> make_samples(const WindowedDataset& data, std::span<const Window> windows) {
  std::vector<Sample> out;
  out.reserve(windows.size());
  for (const auto& w : windows) out.push_back({data.inputs(w), data.targets(w)});
  return out;
}

Model make_model(const ModelSpec& spec, const Graph& graph, const WindowedDataset& data, std::size_t clusters,
                 std::uint64_t seed) {
  if (graph.nodes() != data.signal.nodes())
    throw DimensionError("graph has " + std::to_string(graph.nodes()) + " nodes but the signal has " +
                         std::to_string(data.signal.nodes()));
  VariantInputs inputs;
  inputs.graph = &graph;
  inputs.train_signal = &data.signal;
  inputs.train_steps = train_frame_count(data);
  inputs.clusters = clusters;
  inputs.seed = seed;
  return Model(spec, build_variant(spec.spatial.variant, inputs), seed);
}

TrainResult train(Model& model, const WindowedDataset& data, const OptimConfig& config, std::uint64_t seed,
                  const TrainHooks& hooks) {
  if (data.train.empty()) throw DataError("no training windows");
  if (config.batch_size == 0) throw UsageError("batch size must be positive");
  if (model.spec().horizon != data.horizon)
    throw UsageError("model horizon " + std::to_string(model.spec().horizon) + " does not match dataset horizon " +
                     std::to_string(data.horizon));

  const std::vector<Sample> samples = make_samples(data, data.train);
  const std::span<const Window> val_windows =
      data.validation.empty() ? std::span<const Window>(data.train) : std::span<const Window>(data.validation);
  const double range2 = data.norm.range() * data.norm.range();
  const bool learnable = model.spec().spatial.variant == Variant::learnable_sym;

  AdamConfig adam;
  adam.learning_rate = config.learning_rate;
  adam.weight_decay = config.weight_decay;
  AdamState state;

  std::mt19937_64 order_rng(derive_seed(seed, 0x6f72646572ULL));
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.best_val_mae = std::numeric_limits<double>::infinity();
  std::vector<Mat> best = snapshot(model);
  std::size_t since_best = 0;
  std::size_t global_step = 0;
  double forward_total = 0.0, backward_total = 0.0;

  for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto epoch_start = Clock::now();
    std::shuffle(order.begin(), order.end(), order_rng);
    const double forcing = config.forcing.probability(epoch);
    const std::uint64_t epoch_seed = derive_seed(seed, epoch + 1);

    double task_sum = 0.0, sparse_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t first = 0; first < order.size(); first += config.batch_size, ++batch_index) {
      const std::size_t last = std::min(order.size(), first + config.batch_size);
      std::vector<Sample> batch;
      FrameBatch truth;
      batch.reserve(last - first);
      for (std::size_t i = first; i < last; ++i) {
        batch.push_back(samples[order[i]]);
        truth.push_back(samples[order[i]].targets);
      }

      StepOptions opts;
      opts.mode = Mode::train;
      opts.forcing_probability = forcing;
      opts.seed = derive_seed(epoch_seed, batch_index);
      opts.threads = config.threads;
      opts.keep_trace = true;

      auto t0 = Clock::now();
      ForwardRecord record = model.forward(batch, opts);
      if (auto bad = first_nonfinite(record.predictions, "prediction"); !bad.empty())
        diverged(bad, epoch + 1, batch_index);
      const double task = range2 * mse_loss(record.predictions, truth);
      const double sparse = learnable ? l1_penalty(model.spatial(), config.lambda_sparse) : 0.0;
      forward_total += seconds_since(t0);
      if (!std::isfinite(task)) diverged("task loss", epoch + 1, batch_index);

      t0 = Clock::now();
      GradSet grads = model.backward(record, mse_loss_gradient(record.predictions, truth, range2), config.threads);
      if (learnable) add_l1_subgradient(model.spatial(), config.lambda_sparse, grads);
      backward_total += seconds_since(t0);
      if (auto bad = first_nonfinite(grads); !bad.empty()) diverged(bad, epoch + 1, batch_index);

      auto params = model.parameters();
      adam_step(params, grads, state, adam);
      if (auto bad = first_nonfinite(std::as_const(model).parameters()); !bad.empty())
        diverged(bad, epoch + 1, batch_index);

      const double weight = static_cast<double>(batch.size());
      task_sum += task * weight;
      sparse_sum += sparse * weight;
      ++global_step;
      if (hooks.on_step) hooks.on_step(model, epoch + 1, global_step);
    }

    EpochLoss loss;
    loss.epoch = epoch + 1;
    loss.task = task_sum / static_cast<double>(samples.size());
    loss.sparse = sparse_sum / static_cast<double>(samples.size());
    loss.total = loss.task + loss.sparse;
    loss.forcing_probability = model.spec().horizon > 1 ? forcing : 0.0;
    loss.val_mae = evaluate(model, data, val_windows, config.threads).joint.mae;

    if (learnable) {
      const auto sym = model.spatial().symmetric_interactions();
      for (std::size_t k = 0; k < sym.size(); ++k)
        result.interaction_series.push_back({epoch + 1, k, sparsity_fraction(sym[k]), frobenius_norm(sym[k])});
    }

    if (loss.val_mae < result.best_val_mae) {
      result.best_val_mae = loss.val_mae;
      result.best_epoch = epoch + 1;
      best = snapshot(model);
      since_best = 0;
    } else {
      ++since_best;
    }
    loss.seconds = seconds_since(epoch_start);
    result.history.push_back(loss);
    if (hooks.on_epoch) hooks.on_epoch(model, loss);
    if (config.patience > 0 && since_best >= config.patience) {
      result.stopped_early = true;
      break;
    }
  }

  restore(model, best);

  RuntimeReport& rt = result.runtime;
  rt.epochs = result.history.size();
  double total = 0.0;
  for (const auto& h : result.history) total += h.seconds;
  if (rt.epochs > 0) {
    const double e = static_cast<double>(rt.epochs);
    rt.mean_epoch_seconds = total / e;
    rt.mean_forward_seconds = forward_total / e;
    rt.mean_backward_seconds = backward_total / e;
  }
  rt.total_minutes = total / 60.0;
  return result;
}

EvaluationReport evaluate(const Model& model, const WindowedDataset& data, std::span<const Window> windows,
                          std::size_t threads, std::size_t steps) {
  if (windows.empty()) throw DataError("evaluation set is empty");
  if (steps > data.horizon)
    throw UsageError("cannot score " + std::to_string(steps) + " steps of a " + std::to_string(data.horizon) +
                     "-step horizon");
  std::vector<std::vector<Mat>> predictions(windows.size());
  parallel_for(windows.size(), threads,
               [&](std::size_t i) { predictions[i] = model.predict(data.inputs(windows[i])); });

  const std::size_t horizon = steps == 0 ? data.horizon : steps;
  std::vector<std::vector<double>> truth_by_step(horizon), pred_by_step(horizon);
  std::vector<double> truth_all, pred_all;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto targets = data.targets(windows[i]);
    if (predictions[i].size() != data.horizon) throw DimensionError("prediction horizon mismatch");
    for (std::size_t s = 0; s < horizon; ++s) {
      require_same_shape(targets[s], predictions[i][s], "evaluation");
      for (std::size_t j = 0; j < targets[s].size(); ++j) {
        const double y = data.norm.invert(targets[s].values()[j]);
        const double p = data.norm.invert(predictions[i][s].values()[j]);
        truth_by_step[s].push_back(y);
        pred_by_step[s].push_back(p);
        truth_all.push_back(y);
        pred_all.push_back(p);
      }
    }
  }

  EvaluationReport report;
  report.windows = windows.size();
  report.joint = compute_metrics(truth_all, pred_all);
  for (std::size_t s = 0; s < horizon; ++s) report.per_step.push_back(compute_metrics(truth_by_step[s], pred_by_step[s]));
  return report;
}

EvaluationReport evaluate(const Model& model, const WindowedDataset& data, std::size_t threads) {
  return evaluate(model, data, data.test, threads);
}

}  // namespace intergat
