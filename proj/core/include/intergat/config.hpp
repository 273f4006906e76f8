#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "intergat/model.hpp"
#include "intergat/trainer.hpp"

namespace intergat {

struct DataConfig {
  enum class Source { synth, csv };
  Source source = Source::synth;
  std::string speeds;     // T x N or N x T CSV of speeds (csv source)
  std::string adjacency;  // N x N CSV (csv source)
  bool zeros_missing = false;
  std::size_t synth_nodes = 20;
  std::size_t synth_communities = 4;
  std::size_t synth_steps = 400;
  std::uint64_t synth_seed = 7;  // dataset seed, independent of the model seeds
  double train_ratio = 0.8;
  double validation_fraction = 0.1;
};

struct RunConfig {
  DataConfig data;
  ModelSpec model;
  std::size_t clusters = 10;  // spectral_block cluster count
  OptimConfig optim;
  std::size_t history = 12;
  std::uint64_t seed = 7;
  std::size_t seeds = 1;  // runs use seed, seed + 1, ...
  std::string out = "runs/intergat";

  bool operator==(const RunConfig&) const;
};

/// Parses an INI document with sections [data] [model] [optim] [task] [run]. Missing keys
/// keep their defaults. Unknown keys and bad values raise ConfigError naming "section.key".
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Emits every field; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Validates cross-field constraints (positive sizes, ratios in range). Throws ConfigError.
void validate(const RunConfig& config);

}  // namespace intergat
