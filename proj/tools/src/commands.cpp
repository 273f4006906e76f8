#include "intergat_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include <intergat/checkpoint.hpp>
#include <intergat/csv_io.hpp>
#include <intergat/error.hpp>
#include <intergat/interaction.hpp>
#include <intergat/spectra.hpp>
#include <intergat/synth.hpp>

namespace intergat::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError(path.string() + ": cannot write");
  out << text;
}

/// Comma-separated rows with a header line.
class CsvWriter {
 public:
  CsvWriter(const fs::path& path, std::initializer_list<std::string_view> header) : out_(path, std::ios::binary) {
    if (!out_) throw LoadError(path.string() + ": cannot write");
    bool first = true;
    for (auto h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(std::string_view v) { return std::string(v); }
  static std::string cell(const char* v) { return v; }
  std::ofstream out_;
};

ordered_json metrics_json(const MetricReport& m) {
  return {{"rmse", m.rmse}, {"mae", m.mae}, {"accuracy", m.accuracy}, {"r2", m.r2}, {"var", m.var}};
}

ordered_json evaluation_json(const EvaluationReport& e, double step_minutes) {
  ordered_json steps = ordered_json::array();
  for (std::size_t s = 0; s < e.per_step.size(); ++s) {
    ordered_json row = {{"step", s + 1}};
    if (step_minutes > 0.0) row["minutes"] = step_minutes * static_cast<double>(s + 1);
    row.update(metrics_json(e.per_step[s]));
    steps.push_back(std::move(row));
  }
  return {{"windows", e.windows}, {"joint", metrics_json(e.joint)}, {"per_step", std::move(steps)}};
}

struct Stats {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and sample standard deviation (0 for a single value).
Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return s;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

void write_aggregate(const fs::path& path, const std::vector<RunSummary>& runs) {
  CsvWriter csv(path, {"metric", "mean", "std", "runs", "summary"});
  auto add = [&](const char* name, auto get) {
    std::vector<double> values;
    for (const auto& r : runs) values.push_back(get(r));
    const Stats s = stats(values);
    csv.row(name, s.mean, s.std, runs.size(), fixed(s.mean, 4) + " ± " + fixed(s.std, 4));
  };
  add("rmse", [](const RunSummary& r) { return r.test.joint.rmse; });
  add("mae", [](const RunSummary& r) { return r.test.joint.mae; });
  add("accuracy", [](const RunSummary& r) { return r.test.joint.accuracy; });
  add("r2", [](const RunSummary& r) { return r.test.joint.r2; });
  add("var", [](const RunSummary& r) { return r.test.joint.var; });
  add("mean_epoch_seconds", [](const RunSummary& r) { return r.training.runtime.mean_epoch_seconds; });
}

ModelSpec resolve_spec(const RunConfig& config, const SignalTensor& signal) {
  ModelSpec spec = config.model;
  spec.spatial.nodes = signal.nodes();
  spec.spatial.in_features = signal.features();
  return spec;
}

RunSummary train_one(const RunConfig& config, std::uint64_t seed, const LoadedData& data, const fs::path& dir) {
  fs::create_directories(dir);
  RunConfig effective = config;
  effective.seed = seed;
  effective.seeds = 1;
  effective.out = dir.generic_string();

  const WindowedDataset windows = make_windows(config, data.signal);
  Model model = make_model(resolve_spec(config, data.signal), data.graph, windows, config.clusters, seed);

  RunSummary run;
  run.seed = seed;
  run.dir = dir;
  run.parameters = model.parameter_count();
  run.training = train(model, windows, config.optim, seed);
  run.test = evaluate(model, windows, config.optim.threads);

  const std::string config_text = emit_config(effective);
  write_text(dir / "config.ini", config_text);
  save_checkpoint(dir / "checkpoint.json",
                  make_checkpoint(model, windows.norm, windows.history, data.graph, seed, config_text));

  {
    CsvWriter loss(dir / "loss.csv",
                   {"epoch", "task_loss", "sparse_loss", "total_loss", "val_mae", "teacher_forcing"});
    for (const auto& e : run.training.history)
      loss.row(e.epoch, e.task, e.sparse, e.total, e.val_mae, e.forcing_probability);
  }
  {
    CsvWriter series(dir / "interaction_series.csv", {"epoch", "head", "sparsity", "frobenius"});
    for (const auto& s : run.training.interaction_series) series.row(s.epoch, s.head, s.sparsity, s.frobenius);
  }
  const RuntimeReport& rt = run.training.runtime;
  ordered_json per_epoch = ordered_json::array();
  for (const auto& e : run.training.history) per_epoch.push_back(e.seconds);
  const ordered_json runtime = {{"epochs", rt.epochs},
                                {"mean_epoch_seconds", rt.mean_epoch_seconds},
                                {"total_minutes", rt.total_minutes},
                                {"mean_forward_seconds", rt.mean_forward_seconds},
                                {"mean_backward_seconds", rt.mean_backward_seconds},
                                {"epoch_seconds", std::move(per_epoch)}};
  write_text(dir / "runtime.json", runtime.dump(2) + "\n");

  ordered_json metrics = {{"variant", std::string(to_string(config.model.spatial.variant))},
                          {"seed", seed},
                          {"horizon", windows.horizon},
                          {"parameters", run.parameters},
                          {"best_epoch", run.training.best_epoch},
                          {"epochs_run", run.training.history.size()},
                          {"best_val_mae", run.training.best_val_mae}};
  metrics.update(evaluation_json(run.test, 0.0));
  write_text(dir / "metrics.json", metrics.dump(2) + "\n");

  std::cout << to_string(config.model.spatial.variant) << " seed " << seed << ": test MAE " << fixed(run.test.joint.mae, 4)
            << ", RMSE " << fixed(run.test.joint.rmse, 4) << ", accuracy " << fixed(run.test.joint.accuracy, 4) << " ("
            << run.training.history.size() << " epochs, best " << run.training.best_epoch << ")\n";
  return run;
}

std::vector<RunSummary> train_seeds(const RunConfig& config, const LoadedData& data, const fs::path& out) {
  std::vector<RunSummary> runs;
  for (std::size_t i = 0; i < config.seeds; ++i) {
    const std::uint64_t seed = config.seed + i;
    const fs::path dir = config.seeds == 1 ? out : out / ("seed_" + std::to_string(seed));
    runs.push_back(train_one(config, seed, data, dir));
  }
  if (config.seeds > 1) write_aggregate(out / "aggregate_metrics.csv", runs);
  return runs;
}

Mat top_percent_filter(const Mat& m, double percent) {
  if (percent >= 100.0) return m;
  std::vector<double> sorted(m.values().begin(), m.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const auto keep = static_cast<std::size_t>(std::ceil(percent / 100.0 * static_cast<double>(sorted.size())));
  if (keep == 0) return Mat(m.rows(), m.cols());
  const double threshold = sorted[keep - 1];
  Mat out = m;
  for (double& v : out.values())
    if (v < threshold) v = 0.0;
  return out;
}

void write_spectrum(const fs::path& dir, const std::string& tag, const SpectralReport& r, std::size_t top_vectors) {
  {
    CsvWriter csv(dir / ("spectra_" + tag + ".csv"), {"index", "eigenvalue", "dirichlet_energy", "ipr"});
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) csv.row(k, r.eigenvalues[k], r.dirichlet[k], r.ipr[k]);
  }
  const std::size_t n = r.eigenvalues.size();
  const std::size_t count = std::min(top_vectors, n);
  std::ofstream out(dir / ("eigenvectors_" + tag + ".csv"), std::ios::binary);
  out << "node";
  for (std::size_t j = 0; j < count; ++j) out << ",v" << (n - 1 - j);
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out << i;
    for (std::size_t j = 0; j < count; ++j) out << ',' << num(r.decomposition.vectors(i, n - 1 - j));
    out << '\n';
  }
}

void write_contrast(const fs::path& path, const ContrastTable& t) {
  CsvWriter csv(path, {"k", "mu_intra", "mu_inter", "sigma_intra", "sigma_inter", "contrast", "std", "valid"});
  for (const auto& r : t.rows) csv.row(r.k, r.mu_intra, r.mu_inter, r.sigma_intra, r.sigma_inter, r.contrast, r.std, r.valid);
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UsageError*>(&e)) return kConfig;
  if (dynamic_cast<const LoadError*>(&e) || dynamic_cast<const DataError*>(&e) ||
      dynamic_cast<const DimensionError*>(&e))
    return kData;
  if (dynamic_cast<const NumericError*>(&e)) return kNumeric;
  if (dynamic_cast<const CompatibilityError*>(&e)) return kCompatibility;
  return kFailure;
}

LoadedData load_data(const RunConfig& config) {
  if (config.data.source == DataConfig::Source::synth) {
    auto syn = synth_community_traffic(config.data.synth_nodes, config.data.synth_communities, config.data.synth_steps,
                                       config.data.synth_seed);
    return {std::move(syn.graph), std::move(syn.signal)};
  }
  CsvLoadOptions opts;
  opts.zeros_missing = config.data.zeros_missing;
  auto data = load_csv_dataset(config.data.adjacency, config.data.speeds, opts);
  return {std::move(data.graph), std::move(data.signal)};
}

WindowedDataset make_windows(const RunConfig& config, const SignalTensor& raw) {
  SplitOptions opt;
  opt.history = config.history;
  opt.horizon = config.model.horizon;
  opt.train_ratio = config.data.train_ratio;
  opt.validation_fraction = config.data.validation_fraction;
  return window_split(raw, opt);
}

std::vector<RunSummary> cmd_train(const RunConfig& config) {
  validate(config);
  const LoadedData data = load_data(config);
  const fs::path out = config.out;
  fs::create_directories(out);
  return train_seeds(config, data, out);
}

std::string cmd_evaluate(const EvaluateOptions& options) {
  const Checkpoint ck = load_checkpoint(options.checkpoint);
  RunConfig config = options.data_override ? *options.data_override
                                           : (ck.config.empty() ? RunConfig{} : parse_config(ck.config));
  const LoadedData data = load_data(config);
  require_compatible(ck, data.signal.nodes(), data.signal.features());
  const Model model = restore_model(ck);
  config.history = ck.history;
  config.model.horizon = ck.spec.horizon;
  WindowedDataset windows = make_windows(config, data.signal);
  windows.norm = ck.norm;
  windows.signal = apply_normalization(data.signal, ck.norm);
  if (options.steps > ck.spec.horizon)
    throw CompatibilityError("checkpoint predicts " + std::to_string(ck.spec.horizon) + " steps, " +
                             std::to_string(options.steps) + " requested");
  const EvaluationReport report = evaluate(model, windows, windows.test, options.threads, options.steps);
  ordered_json doc = {{"checkpoint", options.checkpoint.generic_string()},
                      {"variant", std::string(to_string(ck.spec.spatial.variant))},
                      {"horizon", report.per_step.size()}};
  doc.update(evaluation_json(report, options.step_minutes));
  const std::string text = doc.dump(2) + "\n";
  if (options.out) {
    fs::create_directories(*options.out);
    write_text(*options.out / "metrics.json", text);
  }
  return text;
}

std::vector<std::pair<Variant, std::vector<RunSummary>>> cmd_ablate(const RunConfig& config,
                                                                     const std::vector<Variant>& variants) {
  validate(config);
  const LoadedData data = load_data(config);
  const fs::path out = config.out;
  fs::create_directories(out);
  std::vector<Variant> ordered;
  for (Variant v : all_variants())
    if (std::find(variants.begin(), variants.end(), v) != variants.end()) ordered.push_back(v);

  std::vector<std::pair<Variant, std::vector<RunSummary>>> results;
  for (Variant v : ordered) {
    RunConfig c = config;
    c.model.spatial.variant = v;
    results.emplace_back(v, train_seeds(c, data, out / std::string(to_string(v))));
  }

  CsvWriter csv(out / "ablation.csv", {"variant", "mae", "mae_std", "rmse", "accuracy", "accuracy_std", "epoch_seconds",
                                       "forward_seconds", "backward_seconds", "parameters", "runs"});
  for (const auto& [v, runs] : results) {
    std::vector<double> mae, rmse, acc, epoch, fwd, bwd;
    for (const auto& r : runs) {
      mae.push_back(r.test.joint.mae);
      rmse.push_back(r.test.joint.rmse);
      acc.push_back(r.test.joint.accuracy);
      epoch.push_back(r.training.runtime.mean_epoch_seconds);
      fwd.push_back(r.training.runtime.mean_forward_seconds);
      bwd.push_back(r.training.runtime.mean_backward_seconds);
    }
    csv.row(to_string(v), stats(mae).mean, stats(mae).std, stats(rmse).mean, stats(acc).mean, stats(acc).std,
            stats(epoch).mean, stats(fwd).mean, stats(bwd).mean, runs.front().parameters, runs.size());
  }
  return results;
}

void cmd_analyze(const AnalyzeOptions& options) {
  const Checkpoint ck = load_checkpoint(options.checkpoint);
  if (ck.spec.spatial.variant != Variant::learnable_sym)
    throw CompatibilityError(options.checkpoint.string() + ": checkpoint has no interaction matrices (variant " +
                             std::string(to_string(ck.spec.spatial.variant)) + ")");
  const Model model = restore_model(ck);
  const std::vector<Mat> raw = model.spatial().symmetric_interactions();
  const std::vector<Mat> processed = model.spatial().processed_interactions();
  const std::size_t heads = raw.size();
  fs::create_directories(options.out);

  auto pick = [&](AnalyzeOptions::Matrix which, std::size_t k) {
    return which == AnalyzeOptions::Matrix::raw ? raw[k] : processed[k];
  };

  std::vector<Mat> spectral;
  for (std::size_t k = 0; k < heads; ++k) spectral.push_back(symmetrize(pick(options.spectra_matrix, k)));
  const Mat spectral_agg = aggregate_interactions(spectral, options.aggregation);

  {
    CsvWriter summary(options.out / "spectral_summary.csv", {"matrix", "rank", "trace", "eigenvalue_sum", "min_eigenvalue",
                                                             "max_eigenvalue", "sparsity", "frobenius"});
    auto analyze = [&](const std::string& tag, const Mat& m) {
      const SpectralReport r = analyze_spectrum(m);
      write_spectrum(options.out, tag, r, options.top_vectors);
      double total = 0.0;
      for (double v : r.eigenvalues) total += v;
      summary.row(tag, r.rank, r.trace, total, r.eigenvalues.front(), r.eigenvalues.back(), sparsity_fraction(m),
                  frobenius_norm(m));
    };
    for (std::size_t k = 0; k < heads; ++k) analyze("head" + std::to_string(k), spectral[k]);
    analyze("aggregate", spectral_agg);
  }

  for (std::size_t k = 0; k < heads; ++k)
    write_csv_matrix(options.out / ("heatmap_head" + std::to_string(k) + ".csv"),
                     top_percent_filter(spectral[k], options.top_percent));
  write_csv_matrix(options.out / "heatmap_aggregate.csv", top_percent_filter(spectral_agg, options.top_percent));

  const Graph graph(ck.adjacency);
  const std::size_t n = graph.nodes();
  const std::size_t k_max = std::min(options.k_max, n);
  const std::size_t k_min = std::max<std::size_t>(2, options.k_min);
  if (k_min > k_max) throw UsageError("analyze: empty cluster range for " + std::to_string(n) + " nodes");
  const auto partitions = spectral_partitions(graph, k_min, k_max, options.seed);
  {
    CsvWriter csv(options.out / "partitions.csv", {"k", "node", "cluster"});
    for (const auto& p : partitions)
      for (std::size_t i = 0; i < n; ++i) csv.row(p.k, i, p.labels[i]);
  }

  std::vector<Mat> contrast_inputs;
  for (std::size_t k = 0; k < heads; ++k) contrast_inputs.push_back(pick(options.contrast_matrix, k));
  CsvWriter summary(options.out / "contrast_summary.csv", {"matrix", "mean_contrast", "contrast_std", "valid_k"});
  auto contrast = [&](const std::string& tag, const Mat& m) {
    const ContrastTable t = contrast_table(m, partitions, options.absolute);
    write_contrast(options.out / ("contrast_" + tag + ".csv"), t);
    summary.row(tag, t.mean_contrast, t.contrast_std, t.valid_rows);
  };
  for (std::size_t k = 0; k < heads; ++k) contrast("head" + std::to_string(k), contrast_inputs[k]);
  contrast("aggregate", aggregate_interactions(contrast_inputs, options.aggregation));
}

void cmd_synth(const SynthCommand& options) {
  const auto syn = synth_community_traffic(options.nodes, options.communities, options.steps, options.seed);
  fs::create_directories(options.out);
  write_csv_matrix(options.out / "adjacency.csv", syn.graph.adjacency());
  write_speeds_csv(options.out / "speeds.csv", syn.signal);
  CsvWriter csv(options.out / "communities.csv", {"node", "community"});
  for (std::size_t i = 0; i < syn.community.size(); ++i) csv.row(i, syn.community[i]);
}

}  // namespace intergat::cli
