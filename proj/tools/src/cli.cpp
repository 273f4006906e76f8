#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "intergat_cli/commands.hpp"
#include <intergat/error.hpp>

namespace intergat::cli {
namespace {

/// Replaces or inserts `section.key = value` in INI text.
std::string apply_override(const std::string& text, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError("--set " + assignment + ": expected section.key=value");
  const std::string section = assignment.substr(0, dot);
  const std::string key = assignment.substr(dot + 1, eq - dot - 1);
  const std::string value = assignment.substr(eq + 1);

  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  std::string current;
  bool done = false;
  bool section_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '[') {
      if (current == section && !done) {
        out << key << " = " << value << '\n';
        done = true;
      }
      current = line.substr(1, line.find(']') - 1);
      section_seen = section_seen || current == section;
    } else if (current == section && !done) {
      const auto k = line.find('=');
      if (k != std::string::npos) {
        std::string name = line.substr(0, k);
        name.erase(name.find_last_not_of(" \t") + 1);
        name.erase(0, name.find_first_not_of(" \t"));
        if (name == key) {
          out << key << " = " << value << '\n';
          done = true;
          continue;
        }
      }
    }
    out << line << '\n';
  }
  if (!done) {
    if (!section_seen || current != section) out << '[' << section << "]\n";
    out << key << " = " << value << '\n';
  }
  return out.str();
}

/// Effective config: defaults, then the file, then CLI overrides in order.
RunConfig resolve(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig base = path.empty() ? RunConfig{} : load_config(path);
  if (overrides.empty()) return base;
  std::string text = emit_config(base);
  for (const auto& o : overrides) text = apply_override(text, o);
  return parse_config(text);
}

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::string> seed, seeds, horizon, out, threads, variant;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "INI config file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "override, e.g. optim.epochs=20 (repeatable)");
    app->add_option("--seed", seed, "base seed");
    app->add_option("--seeds", seeds, "number of seeds");
    app->add_option("--horizon", horizon, "prediction steps");
    app->add_option("--out", out, "output directory");
    app->add_option("--threads", threads, "worker threads");
  }
  RunConfig build() const {
    std::vector<std::string> all = sets;
    auto push = [&](const char* field, const std::optional<std::string>& v) {
      if (v) all.push_back(std::string(field) + "=" + *v);
    };
    push("run.seed", seed);
    push("run.seeds", seeds);
    push("task.horizon", horizon);
    push("run.out", out);
    push("run.threads", threads);
    push("model.variant", variant);
    return resolve(config, all);
  }
};

std::vector<Variant> parse_variant_list(const std::string& list) {
  std::vector<Variant> out;
  if (list.empty() || list == "all") return all_variants();
  std::stringstream ss(list);
  std::string tag;
  while (std::getline(ss, tag, ','))
    if (!tag.empty()) out.push_back(parse_variant(tag));
  return out;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Interaction-matrix graph attention for traffic forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "intergat 0.1.0");

  Common train_opts;
  auto* train_cmd = app.add_subcommand("train", "train a model and evaluate it on the test split");
  train_opts.attach(train_cmd);
  train_cmd->add_option("--variant", train_opts.variant, "interaction variant");

  EvaluateOptions eval_opts;
  std::string eval_config;
  std::string eval_out;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on the test split");
  eval_cmd->add_option("--checkpoint", eval_opts.checkpoint, "checkpoint.json")->required();
  eval_cmd->add_option("-c,--config", eval_config, "config whose [data] section replaces the checkpoint's")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--steps", eval_opts.steps, "score the first N horizon steps");
  eval_cmd->add_option("--step-minutes", eval_opts.step_minutes, "minutes per step for per-step labels");
  eval_cmd->add_option("--out", eval_out, "directory for metrics.json");
  eval_cmd->add_option("--threads", eval_opts.threads, "worker threads");

  Common ablate_opts;
  std::string variant_list = "all";
  auto* ablate_cmd = app.add_subcommand("ablate", "train every variant under one config");
  ablate_opts.attach(ablate_cmd);
  ablate_cmd->add_option("--variants", variant_list, "comma-separated variants or 'all'");

  AnalyzeOptions analyze_opts;
  std::string spectra_matrix = "raw";
  std::string contrast_matrix = "processed";
  std::string aggregation = "mean";
  auto* analyze_cmd = app.add_subcommand("analyze", "spectra and community contrast of learned interaction matrices");
  analyze_cmd->add_option("--checkpoint", analyze_opts.checkpoint, "checkpoint.json")->required();
  analyze_cmd->add_option("--out", analyze_opts.out, "output directory")->required();
  analyze_cmd->add_option("--matrix", spectra_matrix, "matrix for spectra: raw or processed")
      ->check(CLI::IsMember({"raw", "processed"}));
  analyze_cmd->add_option("--contrast-matrix", contrast_matrix, "matrix for contrast: raw or processed")
      ->check(CLI::IsMember({"raw", "processed"}));
  analyze_cmd->add_option("--aggregation", aggregation, "head aggregation: mean or sum")
      ->check(CLI::IsMember({"mean", "sum"}));
  analyze_cmd->add_flag("--absolute", analyze_opts.absolute, "pool |I_ij| for contrast");
  analyze_cmd->add_option("--k-min", analyze_opts.k_min, "smallest cluster count");
  analyze_cmd->add_option("--k-max", analyze_opts.k_max, "largest cluster count");
  analyze_cmd->add_option("--top-percent", analyze_opts.top_percent, "heatmap keeps the top P percent of entries")
      ->check(CLI::Range(0.0, 100.0));
  analyze_cmd->add_option("--top-vectors", analyze_opts.top_vectors, "eigenvectors written per matrix");
  analyze_cmd->add_option("--seed", analyze_opts.seed, "k-means seed");

  SynthCommand synth_opts;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic community-structured dataset");
  synth_cmd->add_option("--nodes", synth_opts.nodes, "node count");
  synth_cmd->add_option("--communities", synth_opts.communities, "planted communities");
  synth_cmd->add_option("--steps", synth_opts.steps, "time steps");
  synth_cmd->add_option("--seed", synth_opts.seed, "generator seed");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*train_cmd) {
      cmd_train(train_opts.build());
    } else if (*eval_cmd) {
      if (!eval_config.empty()) eval_opts.data_override = load_config(eval_config);
      if (!eval_out.empty()) eval_opts.out = eval_out;
      std::cout << cmd_evaluate(eval_opts);
    } else if (*ablate_cmd) {
      const RunConfig config = ablate_opts.build();
      cmd_ablate(config, parse_variant_list(variant_list));
    } else if (*analyze_cmd) {
      using M = AnalyzeOptions::Matrix;
      analyze_opts.spectra_matrix = spectra_matrix == "raw" ? M::raw : M::processed;
      analyze_opts.contrast_matrix = contrast_matrix == "raw" ? M::raw : M::processed;
      analyze_opts.aggregation = aggregation == "sum" ? Aggregation::sum : Aggregation::mean;
      cmd_analyze(analyze_opts);
    } else if (*synth_cmd) {
      synth_opts.out = synth_out;
      cmd_synth(synth_opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace intergat::cli
